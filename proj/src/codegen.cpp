/*
 * Copyright 2026 The instrujoule Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "instrujoule/codegen.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "instrujoule/error.hpp"

namespace instrujoule {

std::string_view to_string(KernelVariant variant) noexcept {
  return variant == KernelVariant::Total ? "total" : "overhead";
}

namespace {

// Register classes in the order their `.reg` lines are emitted.
struct RegClass {
  std::string_view prefix;
  std::string_view decl_type;
};
constexpr std::array<RegClass, 7> kRegClasses = {{
    {"p", ".pred"},
    {"rs", ".b16"},
    {"h", ".b16"},
    {"r", ".b32"},
    {"f", ".f32"},
    {"rd", ".b64"},
    {"fd", ".f64"},
}};

class RegisterFile {
 public:
  std::string take(std::string_view prefix) {
    int n = ++used_[std::string(prefix)];
    return "%" + std::string(prefix) + std::to_string(n);
  }

  std::vector<std::string> declarations() const {
    std::vector<std::string> out;
    for (const auto& cls : kRegClasses) {
      auto it = used_.find(std::string(cls.prefix));
      if (it == used_.end()) continue;
      out.push_back("\t.reg " + std::string(cls.decl_type) + " \t%" + std::string(cls.prefix) +
                    "<" + std::to_string(it->second + 1) + ">;");
    }
    return out;
  }

 private:
  std::map<std::string, int> used_;
};

struct TypeTraits {
  std::string_view reg_prefix;
  std::string_view mov;
  std::string_view const_b;
  std::string_view const_c;
};

TypeTraits traits_for(OperandType type) {
  switch (type) {
    case OperandType::u16: return {"rs", "mov.u16", "3", "5"};
    case OperandType::u32:
    case OperandType::s32: return {"r", "mov.u32", "3", "5"};
    case OperandType::u64: return {"rd", "mov.u64", "3", "5"};
    case OperandType::f16: return {"h", "mov.b16", "0x4200", "0x3C00"};
    case OperandType::f32: return {"f", "mov.f32", "0f40400000", "0f3F800000"};
    case OperandType::f64: return {"fd", "mov.f64", "0d4008000000000000", "0d3FF0000000000000"};
  }
  return {"r", "mov.u32", "3", "5"};
}

std::string instr(std::string_view mnemonic, std::string_view operands) {
  std::string line = "\t" + std::string(mnemonic);
  if (!operands.empty()) {
    line += " \t";
    line += operands;
  }
  line += ";";
  return line;
}

std::string join(std::initializer_list<std::string> parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ", ";
    out += p;
  }
  return out;
}

std::string sanitize(std::string_view mnemonic) {
  std::string out(mnemonic);
  std::replace(out.begin(), out.end(), '.', '_');
  return out;
}

// Operand list of one chained instruction; `chain` is both destination and
// a source so instruction k+1 consumes the result of instruction k.
std::string chain_operands(const InstructionSpec& spec, const std::string& chain,
                           const std::string& b, const std::string& c) {
  if (spec.opcode == "copysign") return join({chain, b, chain});
  switch (spec.arity) {
    case 1: return join({chain, chain});
    case 2: return join({chain, chain, b});
    default: return join({chain, chain, b, c});
  }
}

}  // namespace

BenchmarkKernel generate_kernel(const InstructionSpec& spec, KernelVariant variant,
                                std::uint64_t iterations, std::uint32_t unroll_factor) {
  if (!in_catalog(spec)) {
    throw Error(ErrorKind::UnsupportedInstruction,
                "'" + spec.mnemonic() + "' is not in the instruction catalog");
  }
  if (iterations == 0 || iterations > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorKind::InvalidArgument,
                "iterations must be in [1, 2^32-1], got " + std::to_string(iterations));
  }
  if (unroll_factor == 0) {
    throw Error(ErrorKind::InvalidArgument, "unroll factor must be at least 1");
  }

  BenchmarkKernel kernel;
  kernel.spec = spec;
  kernel.variant = variant;
  kernel.iterations = iterations;
  kernel.unroll_factor = unroll_factor;
  kernel.entry_name = "bench_" + sanitize(spec.mnemonic());
  kernel.artifact_name = sanitize(spec.mnemonic()) + "_" + std::string(to_string(variant));
  kernel.n_instructions =
      variant == KernelVariant::Total ? iterations * static_cast<std::uint64_t>(unroll_factor) : 0;

  const auto tt = traits_for(spec.operand_type);
  const auto type = spec.operand_type;
  const bool int32 = type == OperandType::u32 || type == OperandType::s32;
  RegisterFile regs;
  std::vector<std::string> body;

  const std::string param = regs.take("rd");
  const std::string addr = regs.take("rd");
  const std::string counter = regs.take("r");
  const std::string seed = regs.take("r");
  const std::string b = regs.take(tt.reg_prefix);
  const std::string c = regs.take(tt.reg_prefix);

  body.push_back(instr("ld.param.u64", join({param, "[" + kernel.entry_name + "_param_0]"})));
  body.push_back(instr("cvta.to.global.u64", join({addr, param})));
  body.push_back(instr("mov.u32", join({counter, std::to_string(iterations)})));
  body.push_back(instr("mov.u32", join({seed, "7"})));
  body.push_back(instr(tt.mov, join({b, std::string(tt.const_b)})));
  body.push_back(instr(tt.mov, join({c, std::string(tt.const_c)})));
  body.push_back(instr("st.global.u32", join({"[" + addr + "]", seed})));
  body.emplace_back();
  body.push_back("BB0_1:");

  // Fresh chain input every iteration: seed + loop counter.
  const std::string fresh = regs.take("r");
  body.push_back(instr("add.s32", join({fresh, seed, counter})));
  std::string chain = fresh;
  switch (type) {
    case OperandType::u32:
    case OperandType::s32:
      break;
    case OperandType::u16:
      chain = regs.take(tt.reg_prefix);
      body.push_back(instr("cvt.u16.u32", join({chain, fresh})));
      break;
    case OperandType::u64:
      chain = regs.take(tt.reg_prefix);
      body.push_back(instr("cvt.u64.u32", join({chain, fresh})));
      break;
    case OperandType::f16:
      chain = regs.take(tt.reg_prefix);
      body.push_back(instr("cvt.rn.f16.u32", join({chain, fresh})));
      break;
    case OperandType::f32:
      chain = regs.take(tt.reg_prefix);
      body.push_back(instr("cvt.rn.f32.u32", join({chain, fresh})));
      break;
    case OperandType::f64:
      chain = regs.take(tt.reg_prefix);
      body.push_back(instr("cvt.rn.f64.u32", join({chain, fresh})));
      break;
  }

  body.emplace_back();
  if (variant == KernelVariant::Total) {
    const auto operands = chain_operands(spec, chain, b, c);
    for (std::uint32_t k = 0; k < unroll_factor; ++k) {
      body.push_back(instr(spec.mnemonic(), operands));
    }
  }
  body.emplace_back();

  // Bring the chain result into a 32-bit integer for the accumulation.
  std::string bits = chain;
  if (!int32) {
    switch (type) {
      case OperandType::f32:
        bits = regs.take("r");
        body.push_back(instr("mov.b32", join({bits, chain})));
        break;
      case OperandType::f64: {
        const auto wide = regs.take("rd");
        bits = regs.take("r");
        body.push_back(instr("mov.b64", join({wide, chain})));
        body.push_back(instr("cvt.u32.u64", join({bits, wide})));
        break;
      }
      case OperandType::f16: {
        const auto narrow = regs.take("rs");
        bits = regs.take("r");
        body.push_back(instr("mov.b16", join({narrow, chain})));
        body.push_back(instr("cvt.u32.u16", join({bits, narrow})));
        break;
      }
      case OperandType::u16:
        bits = regs.take("r");
        body.push_back(instr("cvt.u32.u16", join({bits, chain})));
        break;
      case OperandType::u64:
        bits = regs.take("r");
        body.push_back(instr("cvt.u32.u64", join({bits, chain})));
        break;
      default:
        break;
    }
  }

  const std::string loaded = regs.take("r");
  const std::string sum = regs.take("r");
  const std::string pred = regs.take("p");
  body.push_back(instr("ld.global.u32", join({loaded, "[" + addr + "]"})));
  body.push_back(instr("add.s32", join({sum, loaded, bits})));
  body.push_back(instr("st.global.u32", join({"[" + addr + "]", sum})));
  body.push_back(instr("add.s32", join({counter, counter, "-1"})));
  body.push_back(instr("setp.ne.s32", join({pred, counter, "0"})));
  body.push_back("\t@" + pred + " bra \tBB0_1;");
  body.emplace_back();
  body.push_back(instr("st.global.u32", join({"[" + addr + "]", sum})));
  body.push_back(instr("ret", ""));

  std::ostringstream os;
  os << "//\n"
     << "// instrujoule microbenchmark: " << spec.mnemonic() << " (" << to_string(spec.category)
     << ": " << spec.table_row << ")\n"
     << "//\n\n"
     << ".version 6.4\n"
     << ".target " << (type == OperandType::f16 ? "sm_60" : "sm_52") << "\n"
     << ".address_size 64\n\n"
     << ".visible .entry " << kernel.entry_name << "(\n"
     << "\t.param .u64 " << kernel.entry_name << "_param_0\n"
     << ")\n"
     << "{\n";
  for (const auto& decl : regs.declarations()) os << decl << "\n";
  os << "\n";
  for (const auto& line : body) os << line << "\n";
  os << "}\n";
  kernel.ptx_text = os.str();
  return kernel;
}

// --- validation -------------------------------------------------------------

namespace {

struct PtxLine {
  enum class Kind { Directive, Label, Instruction, Brace };
  Kind kind = Kind::Directive;
  std::size_t number = 0;
  std::string text;
  std::string guard;
  std::string mnemonic;
  std::vector<std::string> operands;
};

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool is_ident_char(char ch) {
  return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '$' || ch == '.';
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::ParseFailure, what, line);
}

std::vector<PtxLine> scan(std::string_view text) {
  std::vector<PtxLine> out;
  std::size_t number = 0;
  int depth = 0;
  int entries = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++number;
    if (auto c = raw.find("//"); c != std::string_view::npos) raw = raw.substr(0, c);
    auto line = trim(raw);
    if (line.empty()) continue;

    PtxLine pl;
    pl.number = number;
    pl.text = line;
    if (line == "{" || line == "}" || line == "(" || line == ")") {
      pl.kind = PtxLine::Kind::Brace;
      depth += line == "{" ? 1 : line == "}" ? -1 : 0;
      if (depth < 0) parse_fail(number, "unbalanced '}'");
    } else if (line.front() == '.') {
      pl.kind = PtxLine::Kind::Directive;
      if (line.find(".entry") != std::string::npos) ++entries;
    } else if (line.back() == ':') {
      auto name = line.substr(0, line.size() - 1);
      if (name.empty() || !std::all_of(name.begin(), name.end(), is_ident_char)) {
        parse_fail(number, "bad label '" + line + "'");
      }
      pl.kind = PtxLine::Kind::Label;
      pl.mnemonic = name;
    } else {
      if (line.back() != ';') parse_fail(number, "instruction without ';': '" + line + "'");
      std::string_view rest(line);
      rest.remove_suffix(1);
      if (rest.starts_with('@')) {
        auto sp = rest.find_first_of(" \t");
        if (sp == std::string_view::npos) parse_fail(number, "guard without instruction");
        pl.guard = std::string(rest.substr(1, sp - 1));
        rest = std::string_view(rest).substr(sp);
        auto b = rest.find_first_not_of(" \t");
        rest = b == std::string_view::npos ? std::string_view{} : rest.substr(b);
      }
      auto sp = rest.find_first_of(" \t");
      auto mnemonic = rest.substr(0, sp);
      if (mnemonic.empty() || !std::isalpha(static_cast<unsigned char>(mnemonic.front())) ||
          !std::all_of(mnemonic.begin(), mnemonic.end(), is_ident_char)) {
        parse_fail(number, "unrecognised instruction '" + line + "'");
      }
      pl.kind = PtxLine::Kind::Instruction;
      pl.mnemonic = std::string(mnemonic);
      if (sp != std::string_view::npos) {
        auto ops = rest.substr(sp);
        std::size_t start = 0;
        while (start <= ops.size()) {
          auto comma = ops.find(',', start);
          if (comma == std::string_view::npos) comma = ops.size();
          auto op = trim(ops.substr(start, comma - start));
          if (op.empty()) parse_fail(number, "empty operand in '" + line + "'");
          pl.operands.push_back(op);
          start = comma + 1;
        }
      }
    }
    out.push_back(std::move(pl));
  }
  if (depth != 0) parse_fail(number, "unbalanced braces");
  if (entries != 1) parse_fail(0, "expected exactly one .entry, found " + std::to_string(entries));
  if (std::none_of(out.begin(), out.end(),
                   [](const PtxLine& l) { return l.kind == PtxLine::Kind::Instruction; })) {
    parse_fail(0, "no instructions");
  }
  return out;
}

bool reads(const PtxLine& line, const std::string& reg) {
  if (line.operands.size() < 2 && !line.mnemonic.starts_with("st.")) return false;
  // Stores read every operand; everything else writes operand 0.
  std::size_t first = line.mnemonic.starts_with("st.") ? 0 : 1;
  for (std::size_t i = first; i < line.operands.size(); ++i) {
    if (line.operands[i] == reg || line.operands[i] == "[" + reg + "]") return true;
  }
  return false;
}

bool writes(const PtxLine& line, const std::string& reg) {
  return line.kind == PtxLine::Kind::Instruction && !line.mnemonic.starts_with("st.") &&
         !line.operands.empty() && line.operands[0] == reg;
}

}  // namespace

bool ValidationReport::all_pass() const noexcept {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(std::string_view name) const noexcept {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ValidationReport validate_kernel(const BenchmarkKernel& kernel) {
  if (kernel.ptx_text.empty()) throw Error(ErrorKind::ParseFailure, "empty PTX text");
  const auto lines = scan(kernel.ptx_text);
  const std::string target = kernel.spec.mnemonic();

  // Loop: first label up to the guarded branch back to it.
  std::optional<std::size_t> label_at, branch_at;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!label_at && lines[i].kind == PtxLine::Kind::Label) label_at = i;
    if (label_at && lines[i].kind == PtxLine::Kind::Instruction && lines[i].mnemonic == "bra" &&
        !lines[i].guard.empty() && !lines[i].operands.empty() &&
        lines[i].operands[0] == lines[*label_at].mnemonic) {
      branch_at = i;
      break;
    }
  }
  const bool has_loop = label_at && branch_at;
  const std::size_t body_begin = has_loop ? *label_at + 1 : 0;
  const std::size_t body_end = has_loop ? *branch_at : 0;

  std::vector<std::size_t> targets;
  for (std::size_t i = body_begin; i < body_end; ++i) {
    if (lines[i].kind == PtxLine::Kind::Instruction && lines[i].mnemonic == target) {
      targets.push_back(i);
    }
  }

  ValidationReport report;

  {
    const std::uint64_t expected =
        kernel.variant == KernelVariant::Total ? kernel.unroll_factor : 0;
    ValidationCheck c{std::string(kCheckOpcodeCount), false, {}};
    if (!has_loop) {
      c.detail = "no loop found";
    } else {
      c.passed = targets.size() == expected;
      c.detail = "found " + std::to_string(targets.size()) + " '" + target + "' in loop body, expected " +
                 std::to_string(expected);
    }
    report.checks.push_back(std::move(c));
  }

  {
    ValidationCheck c{std::string(kCheckDependencyChain), true, "no chained instructions"};
    if (!targets.empty()) {
      c.detail = "chain of " + std::to_string(targets.size());
      for (std::size_t k = 0; k + 1 < targets.size(); ++k) {
        const auto& cur = lines[targets[k]];
        const auto& next = lines[targets[k + 1]];
        if (cur.operands.empty() || !reads(next, cur.operands[0])) {
          c.passed = false;
          c.detail = "line " + std::to_string(next.number) + " does not consume " +
                     (cur.operands.empty() ? std::string("?") : cur.operands[0]);
          break;
        }
      }
      // The first link must read a value produced earlier in the same iteration.
      const auto& first = lines[targets.front()];
      bool fresh = false;
      for (std::size_t i = body_begin; i < targets.front() && !fresh; ++i) {
        if (lines[i].kind != PtxLine::Kind::Instruction || lines[i].operands.empty()) continue;
        fresh = reads(first, lines[i].operands[0]) && writes(lines[i], lines[i].operands[0]);
      }
      if (c.passed && !fresh) {
        c.passed = false;
        c.detail = "first chained instruction does not read a per-iteration value";
      }
      // The last link must feed something after the block.
      const auto& last = lines[targets.back()];
      bool consumed = false;
      for (std::size_t i = targets.back() + 1; i < body_end && !consumed; ++i) {
        if (lines[i].kind == PtxLine::Kind::Instruction && lines[i].mnemonic != target) {
          consumed = !last.operands.empty() && reads(lines[i], last.operands[0]);
        }
      }
      if (c.passed && !consumed) {
        c.passed = false;
        c.detail = "chain result is never consumed";
      }
    }
    report.checks.push_back(std::move(c));
  }

  {
    ValidationCheck c{std::string(kCheckLoopBound), false, {}};
    if (!has_loop) {
      c.detail = "no loop found";
    } else {
      const auto& branch = lines[*branch_at];
      std::string pred = branch.guard;
      if (pred.starts_with('!')) pred.erase(0, 1);
      std::optional<std::string> counter;
      for (std::size_t i = *branch_at; i-- > body_begin;) {
        if (lines[i].kind == PtxLine::Kind::Instruction && lines[i].mnemonic.starts_with("setp.") &&
            lines[i].operands.size() == 3 && lines[i].operands[0] == pred &&
            lines[i].operands[2] == "0") {
          counter = lines[i].operands[1];
          break;
        }
      }
      std::optional<std::string> literal;
      if (counter) {
        for (std::size_t i = 0; i < *label_at; ++i) {
          if (lines[i].kind == PtxLine::Kind::Instruction && lines[i].mnemonic.starts_with("mov.") &&
              lines[i].operands.size() == 2 && lines[i].operands[0] == *counter) {
            literal = lines[i].operands[1];
          }
        }
      }
      bool decremented = false;
      for (std::size_t i = body_begin; counter && i < body_end; ++i) {
        const auto& l = lines[i];
        decremented |= l.kind == PtxLine::Kind::Instruction && l.operands.size() == 3 &&
                       l.operands[0] == *counter && l.operands[1] == *counter &&
                       ((l.mnemonic.starts_with("add.") && l.operands[2] == "-1") ||
                        (l.mnemonic.starts_with("sub.") && l.operands[2] == "1"));
      }
      const std::string want = std::to_string(kernel.iterations);
      c.passed = literal && *literal == want && decremented;
      c.detail = !counter ? "no predicate compare against 0 before the back-branch"
                 : !literal ? "loop counter " + *counter + " is never initialised"
                 : !decremented ? "loop counter " + *counter + " is not decremented"
                                : "counter " + *counter + " starts at " + *literal + ", expected " + want;
    }
    report.checks.push_back(std::move(c));
  }

  {
    ValidationCheck c{std::string(kCheckLoadAddStore), false, "no ld.global/add/st.global sequence in loop"};
    const std::size_t from = targets.empty() ? body_begin : targets.back() + 1;
    for (std::size_t i = from; i < body_end && !c.passed; ++i) {
      const auto& ld = lines[i];
      if (ld.kind != PtxLine::Kind::Instruction || !ld.mnemonic.starts_with("ld.global") ||
          ld.operands.empty()) {
        continue;
      }
      for (std::size_t j = i + 1; j < body_end && !c.passed; ++j) {
        const auto& add = lines[j];
        if (!add.mnemonic.starts_with("add.") || !reads(add, ld.operands[0])) continue;
        for (std::size_t k = j + 1; k < body_end; ++k) {
          if (lines[k].mnemonic.starts_with("st.global") && reads(lines[k], add.operands[0])) {
            c.passed = true;
            c.detail = "lines " + std::to_string(ld.number) + "-" + std::to_string(lines[k].number);
            break;
          }
        }
      }
    }
    report.checks.push_back(std::move(c));
  }

  {
    ValidationCheck c{std::string(kCheckFinalStore), false, "no st.global after the loop"};
    if (has_loop) {
      for (std::size_t i = *branch_at + 1; i < lines.size(); ++i) {
        if (lines[i].kind != PtxLine::Kind::Instruction) continue;
        if (lines[i].mnemonic == "ret") break;
        if (lines[i].mnemonic.starts_with("st.global")) {
          c.passed = true;
          c.detail = "line " + std::to_string(lines[i].number);
          break;
        }
      }
    }
    report.checks.push_back(std::move(c));
  }

  return report;
}

std::string emit_build_recipe(const BenchmarkKernel& kernel) {
  const auto& a = kernel.artifact_name;
  const auto other = sanitize(kernel.spec.mnemonic()) + "_" +
                     std::string(to_string(kernel.variant == KernelVariant::Total
                                               ? KernelVariant::Overhead
                                               : KernelVariant::Total));
  std::ostringstream os;
  os << "Build recipe for " << a << " (entry " << kernel.entry_name << ", "
     << kernel.spec.mnemonic() << ", " << to_string(kernel.variant) << " variant, "
     << kernel.n_instructions << " instructions)\n"
     << "  1. ptxas -arch=sm_XX -O3 " << a << ".ptx -o " << a << ".cubin"
     << "   (use -O0 for the non-optimized run)\n"
     << "  2. fatbinary --create=" << a << ".fatbin --image=profile=sm_XX,file=" << a << ".cubin\n"
     << "  3. In the host program declare an empty __global__ kernel named " << kernel.entry_name
     << "(unsigned int*); compile with nvcc --keep and replace its image in the generated\n"
     << "     .fatbin.c with " << a << ".fatbin, then link the host binary.\n"
     << "  4. Launch with grid=1, block=1 (one block, one thread) on a one-word device buffer.\n"
     << "  5. Copy the word back and compare it with a host-side replay of the loop.\n"
     << "  6. Measure this run, then build and measure " << other
     << " the same way; pair the Total and Overhead energies:\n"
     << "     E_instruction = (E_total - E_overhead) / n_instructions.\n";
  return os.str();
}

}  // namespace instrujoule
