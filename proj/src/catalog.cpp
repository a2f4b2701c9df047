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

#include "instrujoule/catalog.hpp"

#include <vector>

#include "instrujoule/error.hpp"

namespace instrujoule {

std::string_view to_string(OperandType type) noexcept {
  switch (type) {
    case OperandType::u16: return "u16";
    case OperandType::u32: return "u32";
    case OperandType::u64: return "u64";
    case OperandType::s32: return "s32";
    case OperandType::f16: return "f16";
    case OperandType::f32: return "f32";
    case OperandType::f64: return "f64";
  }
  return "?";
}

std::string_view to_string(Category category) noexcept {
  switch (category) {
    case Category::IntegerArithmetic: return "Integer Arithmetic";
    case Category::LogicShift: return "Logic and Shift";
    case Category::FloatSingle: return "Floating Single Precision";
    case Category::Double: return "Double Precision";
    case Category::Half: return "Half Precision";
    case Category::MultiPrecision: return "Multi Precision";
    case Category::SpecialMath: return "Special Mathematical";
    case Category::IntegerIntrinsic: return "Integer Intrinsic";
  }
  return "?";
}

std::string_view to_string(Generation generation) noexcept {
  switch (generation) {
    case Generation::Maxwell: return "Maxwell";
    case Generation::Pascal: return "Pascal";
    case Generation::Volta: return "Volta";
    case Generation::Turing: return "Turing";
  }
  return "?";
}

std::optional<OperandType> parse_operand_type(std::string_view text) noexcept {
  for (auto t : {OperandType::u16, OperandType::u32, OperandType::u64, OperandType::s32,
                 OperandType::f16, OperandType::f32, OperandType::f64}) {
    if (to_string(t) == text) return t;
  }
  return std::nullopt;
}

std::optional<Generation> parse_generation(std::string_view text) noexcept {
  for (auto g : kAllGenerations) {
    if (to_string(g) == text) return g;
  }
  return std::nullopt;
}

int category_number(Category category) noexcept {
  return static_cast<int>(category) + 1;
}

std::string InstructionSpec::mnemonic() const {
  return opcode + modifiers + "." + type_suffix;
}

std::string InstructionSpec::short_key() const {
  return opcode + "." + std::string(to_string(operand_type));
}

bool is_consistent(const InstructionSpec& spec) noexcept {
  const auto t = spec.operand_type;
  const bool integer = t == OperandType::u16 || t == OperandType::u32 ||
                       t == OperandType::u64 || t == OperandType::s32;
  switch (spec.category) {
    case Category::IntegerArithmetic:
    case Category::LogicShift:
    case Category::MultiPrecision:
    case Category::IntegerIntrinsic:
      return integer;
    case Category::FloatSingle:
    case Category::SpecialMath:
      return t == OperandType::f32;
    case Category::Double:
      return t == OperandType::f64;
    case Category::Half:
      return t == OperandType::f16;
  }
  return false;
}

bool supported_on(const InstructionSpec& spec, Generation generation) noexcept {
  if (spec.operand_type == OperandType::f16) return generation != Generation::Maxwell;
  return true;
}

namespace {

InstructionSpec make(Category cat, std::string row, std::string opcode, std::string modifiers,
                     OperandType type, std::string suffix, int arity,
                     std::string signedness = {}) {
  InstructionSpec s;
  s.opcode = std::move(opcode);
  s.modifiers = std::move(modifiers);
  s.operand_type = type;
  s.type_suffix = std::move(suffix);
  s.category = cat;
  s.arity = arity;
  s.signedness = std::move(signedness);
  s.table_row = std::move(row);
  return s;
}

std::vector<InstructionSpec> build_catalog() {
  using C = Category;
  using T = OperandType;
  std::vector<InstructionSpec> v;

  const std::string iadd = "add / sub / min / max";
  v.push_back(make(C::IntegerArithmetic, iadd, "add", "", T::u32, "u32", 2));
  v.push_back(make(C::IntegerArithmetic, iadd, "sub", "", T::u32, "u32", 2));
  v.push_back(make(C::IntegerArithmetic, iadd, "min", "", T::u32, "u32", 2));
  v.push_back(make(C::IntegerArithmetic, iadd, "max", "", T::u32, "u32", 2));
  v.push_back(make(C::IntegerArithmetic, "mul / mad", "mul", ".lo", T::u32, "u32", 2));
  v.push_back(make(C::IntegerArithmetic, "mul / mad", "mad", ".lo", T::u32, "u32", 3));
  v.push_back(make(C::IntegerArithmetic, "{s} div", "div", "", T::s32, "s32", 2, "{s}"));
  v.push_back(make(C::IntegerArithmetic, "{s} rem", "rem", "", T::s32, "s32", 2, "{s}"));
  v.push_back(make(C::IntegerArithmetic, "abs", "abs", "", T::s32, "s32", 1));
  v.push_back(make(C::IntegerArithmetic, "{u} div", "div", "", T::u32, "u32", 2, "{u}"));
  v.push_back(make(C::IntegerArithmetic, "{u} rem", "rem", "", T::u32, "u32", 2, "{u}"));

  const std::string logic = "and / or / not / xor";
  v.push_back(make(C::LogicShift, logic, "and", "", T::u32, "b32", 2));
  v.push_back(make(C::LogicShift, logic, "or", "", T::u32, "b32", 2));
  v.push_back(make(C::LogicShift, logic, "not", "", T::u32, "b32", 1));
  v.push_back(make(C::LogicShift, logic, "xor", "", T::u32, "b32", 2));
  v.push_back(make(C::LogicShift, "cnot", "cnot", "", T::u32, "b32", 1));
  v.push_back(make(C::LogicShift, "shl / shr", "shl", "", T::u32, "b32", 2));
  v.push_back(make(C::LogicShift, "shl / shr", "shr", "", T::u32, "u32", 2));

  v.push_back(make(C::FloatSingle, iadd, "add", "", T::f32, "f32", 2));
  v.push_back(make(C::FloatSingle, iadd, "sub", "", T::f32, "f32", 2));
  v.push_back(make(C::FloatSingle, iadd, "min", "", T::f32, "f32", 2));
  v.push_back(make(C::FloatSingle, iadd, "max", "", T::f32, "f32", 2));
  v.push_back(make(C::FloatSingle, "mul / mad / fma", "mul", "", T::f32, "f32", 2));
  v.push_back(make(C::FloatSingle, "mul / mad / fma", "mad", ".rn", T::f32, "f32", 3));
  v.push_back(make(C::FloatSingle, "mul / mad / fma", "fma", ".rn", T::f32, "f32", 3));
  v.push_back(make(C::FloatSingle, "div", "div", ".rn", T::f32, "f32", 2));

  v.push_back(make(C::Double, iadd, "add", "", T::f64, "f64", 2));
  v.push_back(make(C::Double, iadd, "sub", "", T::f64, "f64", 2));
  v.push_back(make(C::Double, iadd, "min", "", T::f64, "f64", 2));
  v.push_back(make(C::Double, iadd, "max", "", T::f64, "f64", 2));
  v.push_back(make(C::Double, "div", "div", ".rn", T::f64, "f64", 2));

  const std::string half = "add / sub / mul";
  v.push_back(make(C::Half, half, "add", "", T::f16, "f16", 2));
  v.push_back(make(C::Half, half, "sub", "", T::f16, "f16", 2));
  v.push_back(make(C::Half, half, "mul", "", T::f16, "f16", 2));

  const std::string mp_add = "add.cc / addc / sub.cc";
  v.push_back(make(C::MultiPrecision, mp_add, "add", ".cc", T::u32, "u32", 2));
  v.push_back(make(C::MultiPrecision, mp_add, "addc", "", T::u32, "u32", 2));
  v.push_back(make(C::MultiPrecision, mp_add, "sub", ".cc", T::u32, "u32", 2));
  v.push_back(make(C::MultiPrecision, "subc", "subc", "", T::u32, "u32", 2));
  v.push_back(make(C::MultiPrecision, "mad.cc / madc", "mad", ".lo.cc", T::u32, "u32", 3));
  v.push_back(make(C::MultiPrecision, "mad.cc / madc", "madc", ".lo", T::u32, "u32", 3));

  v.push_back(make(C::SpecialMath, "rcp", "rcp", ".rn", T::f32, "f32", 1));
  v.push_back(make(C::SpecialMath, "sqrt", "sqrt", ".rn", T::f32, "f32", 1));
  v.push_back(make(C::SpecialMath, "approx.sqrt", "sqrt", ".approx", T::f32, "f32", 1));
  v.push_back(make(C::SpecialMath, "rsqrt", "rsqrt", ".approx", T::f32, "f32", 1));
  v.push_back(make(C::SpecialMath, "sin / cos", "sin", ".approx", T::f32, "f32", 1));
  v.push_back(make(C::SpecialMath, "sin / cos", "cos", ".approx", T::f32, "f32", 1));
  v.push_back(make(C::SpecialMath, "lg2", "lg2", ".approx", T::f32, "f32", 1));
  v.push_back(make(C::SpecialMath, "ex2", "ex2", ".approx", T::f32, "f32", 1));
  v.push_back(make(C::SpecialMath, "copysign", "copysign", "", T::f32, "f32", 2));

  v.push_back(make(C::IntegerIntrinsic, "mul24() / mad24()", "mul24", ".lo", T::u32, "u32", 2));
  v.push_back(make(C::IntegerIntrinsic, "mul24() / mad24()", "mad24", ".lo", T::u32, "u32", 3));
  v.push_back(make(C::IntegerIntrinsic, "sad()", "sad", "", T::u32, "u32", 3));
  v.push_back(make(C::IntegerIntrinsic, "popc()", "popc", "", T::u32, "b32", 1));
  v.push_back(make(C::IntegerIntrinsic, "clz()", "clz", "", T::u32, "b32", 1));
  v.push_back(make(C::IntegerIntrinsic, "bfind()", "bfind", "", T::u32, "u32", 1));
  return v;
}

}  // namespace

std::span<const InstructionSpec> list_catalog() {
  static const std::vector<InstructionSpec> catalog = build_catalog();
  return catalog;
}

bool in_catalog(const InstructionSpec& spec) {
  for (const auto& entry : list_catalog()) {
    if (entry == spec) return true;
  }
  return false;
}

const InstructionSpec& find_instruction(std::string_view key) {
  const auto catalog = list_catalog();
  for (const auto& entry : catalog) {
    if (entry.mnemonic() == key) return entry;
  }
  std::vector<const InstructionSpec*> matches;
  for (const auto& entry : catalog) {
    if (entry.short_key() == key) matches.push_back(&entry);
  }
  if (matches.empty()) {
    throw Error(ErrorKind::UnsupportedInstruction,
                "'" + std::string(key) + "' is not in the instruction catalog");
  }
  if (matches.size() > 1) {
    std::string candidates;
    for (const auto* m : matches) {
      if (!candidates.empty()) candidates += ", ";
      candidates += m->mnemonic();
    }
    throw Error(ErrorKind::UnsupportedInstruction,
                "'" + std::string(key) + "' is ambiguous; use one of: " + candidates);
  }
  return *matches.front();
}

}  // namespace instrujoule
