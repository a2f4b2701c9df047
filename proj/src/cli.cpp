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

#include "instrujoule/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "instrujoule/analysis.hpp"
#include "instrujoule/catalog.hpp"
#include "instrujoule/codegen.hpp"
#include "instrujoule/error.hpp"
#include "instrujoule/hardware.hpp"
#include "instrujoule/json_io.hpp"
#include "instrujoule/monitor.hpp"
#include "instrujoule/provider.hpp"
#include "instrujoule/report.hpp"
#include "instrujoule/synthetic.hpp"

namespace instrujoule {

namespace {

// Bad flag values that CLI11 cannot see (exit code 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<double> to_number(std::string_view text) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw Error(ErrorKind::Io, "write error on '" + path + "'");
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

KernelVariant parse_variant(const std::string& text) {
  if (text == "total") return KernelVariant::Total;
  if (text == "overhead") return KernelVariant::Overhead;
  throw UsageError("--variant must be total or overhead");
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string inst;
  std::string variant = "total";
  std::uint64_t iters = kDefaultIterations;
  std::uint32_t unroll = kDefaultUnroll;
  std::string out = "-";
  bool recipe = false;
  bool meta = false;
  bool list = false;
};

std::string catalog_listing() {
  std::string text;
  for (const auto& s : list_catalog()) {
    text += s.mnemonic() + "\t" + std::string(to_string(s.category)) + "\t" + s.table_row + "\n";
  }
  return text;
}

int run_gen(const GenArgs& a, std::ostream& out) {
  if (a.list) {
    write_output(a.out, catalog_listing(), out);
    return 0;
  }
  if (a.inst.empty()) throw UsageError("gen needs --inst (or --list)");
  const auto& spec = find_instruction(a.inst);
  const auto kernel = generate_kernel(spec, parse_variant(a.variant), a.iters, a.unroll);
  if (a.meta) {
    const auto report = validate_kernel(kernel);
    nlohmann::json checks = nlohmann::json::object();
    for (const auto& c : report.checks) checks[c.name] = c.passed;
    nlohmann::json j = {
        {"instruction", spec.mnemonic()},
        {"category", std::string(to_string(spec.category))},
        {"variant", std::string(to_string(kernel.variant))},
        {"entry_name", kernel.entry_name},
        {"artifact_name", kernel.artifact_name},
        {"iterations", kernel.iterations},
        {"unroll_factor", kernel.unroll_factor},
        {"n_instructions", kernel.n_instructions},
        {"validation", checks},
    };
    write_output(a.out, j.dump(2) + "\n", out);
  } else if (a.recipe) {
    write_output(a.out, emit_build_recipe(kernel), out);
  } else {
    write_output(a.out, kernel.ptx_text, out);
  }
  return 0;
}

// ---------------------------------------------------------------- measure

struct MeasureArgs {
  std::string strategy;
  std::string provider;
  std::string workload;
  std::string out = "-";
  std::string trace_out;
  std::string label;
  double read_cost = SimOptions{}.read_cost;
  double interval = SamplerConfig{}.interval;
  double lead = 0.0;
  double tail = 0.0;
  double launch_latency = 0.0;
  double sync_latency = 0.0;
  std::optional<double> start;
};

struct ProviderSetup {
  std::unique_ptr<PowerProvider> provider;
  std::optional<double> default_start;
  std::optional<double> default_duration;
};

ProviderSetup open_provider(const std::string& spec) {
  ProviderSetup s;
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
  if (kind == "replay") {
    if (arg.empty()) throw UsageError("replay provider needs a trace path: replay:<file.csv>");
    auto trace = load_trace_file(arg);
    if (trace.window()) {
      s.default_start = trace.window()->start;
      s.default_duration = trace.window()->duration();
    } else if (!trace.empty()) {
      s.default_start = trace.samples().front().t;
    }
    s.provider = std::make_unique<ReplayProvider>(std::move(trace));
  } else if (kind == "synth") {
    const SyntheticModel model = arg.empty() ? SyntheticModel{} : synthetic_model_from_json(read_file(arg));
    validate_model(model);
    const auto truth = synthetic_truth(model);
    s.default_start = truth.window.start;
    s.default_duration = truth.window.duration();
    s.provider = std::make_unique<SyntheticProvider>(model);
  } else if (kind == "const") {
    const auto mw = to_number(arg);
    if (!mw || *mw < 0.0) throw UsageError("const provider needs a power in mW: const:<mw>");
    s.provider = std::make_unique<ConstantProvider>(*mw);
  } else if (kind == "live") {
    s.provider = open_live_provider();
  } else {
    throw UsageError("unknown provider '" + spec + "' (replay:<csv>, synth[:<model.json>], const:<mw>, live)");
  }
  return s;
}

Workload parse_workload(const std::string& text, const ProviderSetup& setup, const std::string& label) {
  std::optional<double> duration = setup.default_duration;
  std::string name = label;
  if (!text.empty()) {
    if (!text.starts_with("synth:")) throw UsageError("--workload must be synth:<seconds>[:<label>]");
    std::string rest = text.substr(6);
    const auto colon = rest.find(':');
    if (colon != std::string::npos) {
      if (name.empty()) name = rest.substr(colon + 1);
      rest = rest.substr(0, colon);
    }
    duration = to_number(rest);
    if (!duration || !(*duration > 0.0)) throw UsageError("workload duration must be a number > 0");
  }
  if (!duration) throw UsageError("this provider has no kernel window; pass --workload synth:<seconds>");
  return Workload::simulated(*duration, name);
}

int run_measure(const MeasureArgs& a, std::ostream& out) {
  const auto strategy = parse_strategy(a.strategy);
  if (!strategy) throw UsageError("--strategy must be sma, papi or mtsm");
  auto setup = open_provider(a.provider);
  const auto workload = parse_workload(a.workload, setup, a.label);
  double start = a.start.value_or(setup.default_start.value_or(0.0));
  SimOptions sim{a.read_cost, a.launch_latency, a.sync_latency};

  if (*strategy == Strategy::SMA) {
    // SMA starts its lead early so the workload still begins at `start`.
    VirtualClock clock(start - a.lead);
    const auto trace = run_sma(*setup.provider, workload, SamplerConfig::fixed(a.interval), a.lead,
                               a.tail, clock);
    std::ostringstream csv;
    save_trace(trace, csv);
    write_output(a.out, csv.str(), out);
    if (!a.trace_out.empty()) save_trace_file(trace, a.trace_out);
    return 0;
  }
  start -= a.launch_latency;
  VirtualClock clock(start);
  const auto result = *strategy == Strategy::MTSM ? run_mtsm(*setup.provider, workload, clock, sim)
                                                  : run_papi_style(*setup.provider, workload, clock, sim);
  write_output(a.out, to_json(result), out);
  if (!a.trace_out.empty()) save_trace_file(result.trace, a.trace_out);
  return 0;
}

// ---------------------------------------------------------------- analyze-hw

struct AnalyzeHwArgs {
  std::string capture;
  std::string window;
  std::string out = "-";
};

KernelWindow parse_window(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("--window must be <start>,<end>");
  const auto a = to_number(text.substr(0, comma));
  const auto b = to_number(text.substr(comma + 1));
  if (!a || !b) throw UsageError("--window must be <start>,<end>");
  return {*a, *b};
}

int run_analyze_hw(const AnalyzeHwArgs& a, std::ostream& out) {
  const auto capture = load_hw_capture_file(a.capture);
  std::optional<KernelWindow> window;
  if (!a.window.empty()) window = parse_window(a.window);
  const bool json_out = window && (a.out == "-" || ends_with(a.out, ".json"));
  if (json_out) {
    const double e = hw_energy(capture, *window);
    std::size_t inside = 0;
    for (const auto& s : capture.samples()) inside += window->contains(s.t) ? 1 : 0;
    nlohmann::json j = {
        {"energy_mj", e},
        {"window", {{"start", window->start}, {"end", window->end}}},
        {"n_samples", inside},
        {"r_s_ohm", capture.r_s()},
    };
    write_output(a.out, j.dump(2) + "\n", out);
    return 0;
  }
  if (ends_with(a.out, ".json")) throw UsageError("energy output needs --window <start>,<end>");
  auto trace = hw_power_trace(capture);
  if (window) {
    validate_window(*window);
    trace = trace.with_window(window);
  }
  std::ostringstream csv;
  save_trace(trace, csv);
  write_output(a.out, csv.str(), out);
  return 0;
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
  std::string pred;
  std::string ref;
  std::string out = "-";
};

// Accepts one result object or an array of them; instruction energies
// contribute energy_per_instruction_uj, kernel results energy_mj.
std::vector<std::pair<std::string, double>> load_results(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseFailure, "'" + path + "': " + e.what());
  }
  if (!j.is_array()) j = nlohmann::json::array({j});
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& item = j[i];
    std::string label = "#" + std::to_string(i);
    double value = 0;
    if (item.contains("energy_per_instruction_uj")) {
      value = instruction_energy_from_json(item.dump()).energy_per_instruction_uj;
      if (item.contains("instruction") && item["instruction"].is_string()) {
        label = item["instruction"].get<std::string>();
      }
    } else if (item.contains("energy_mj")) {
      value = energy_result_from_json(item.dump()).energy_mj;
    } else {
      throw Error(ErrorKind::ParseFailure,
                  "'" + path + "' entry " + std::to_string(i) + " has no energy field");
    }
    if (item.contains("label") && item["label"].is_string() && !item["label"].get<std::string>().empty()) {
      label = item["label"].get<std::string>();
    }
    out.emplace_back(label, value);
  }
  return out;
}

int run_compare(const CompareArgs& a, std::ostream& out) {
  const auto pred = load_results(a.pred);
  const auto ref = load_results(a.ref);
  if (pred.size() != ref.size()) {
    throw Error(ErrorKind::LengthMismatch, std::to_string(pred.size()) + " predictions vs " +
                                               std::to_string(ref.size()) + " references");
  }
  std::vector<ComparisonItem> items;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    items.push_back({pred[i].first, pred[i].second, ref[i].second, 0.0});
  }
  write_output(a.out, to_json(compare_strategies(items)), out);
  return 0;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::string format = "text";
  std::string fixture;
  std::string out = "-";
  std::string plot;
  std::string total;
  std::string overhead;
  std::uint64_t instructions = 0;
  std::string strategy;
  std::string inst;
  bool non_optimized = false;
};

// A kernel energy given either as a number of millijoules or as a
// measurement JSON file.
std::pair<double, std::optional<Strategy>> kernel_energy(const std::string& text) {
  if (auto v = to_number(text)) return {*v, std::nullopt};
  const auto r = energy_result_from_json(read_file(text));
  return {r.energy_mj, r.strategy};
}

int run_report(const ReportArgs& a, std::ostream& out) {
  if (!a.plot.empty()) {
    if (ends_with(a.plot, ".json")) {
      write_output(a.out, emit_plot_data(energy_result_from_json(read_file(a.plot))), out);
    } else {
      write_output(a.out, emit_plot_data(load_trace_file(a.plot)), out);
    }
    return 0;
  }
  if (!a.total.empty() || !a.overhead.empty()) {
    if (a.total.empty() || a.overhead.empty()) throw UsageError("--total and --overhead go together");
    const auto [e_total, s_total] = kernel_energy(a.total);
    const auto [e_overhead, s_overhead] = kernel_energy(a.overhead);
    Strategy strategy = s_total.value_or(s_overhead.value_or(Strategy::MTSM));
    if (!a.strategy.empty()) {
      auto s = parse_strategy(a.strategy);
      if (!s) throw UsageError("--strategy must be papi or mtsm");
      strategy = *s;
    }
    std::optional<InstructionSpec> spec;
    if (!a.inst.empty()) spec = find_instruction(a.inst);
    const auto energy =
        make_instruction_energy(e_total, e_overhead, a.instructions, strategy, !a.non_optimized, spec);
    write_output(a.out, to_json(energy), out);
    return 0;
  }
  TableFormat format;
  if (a.format == "text") {
    format = TableFormat::Text;
  } else if (a.format == "csv") {
    format = TableFormat::Csv;
  } else {
    throw UsageError("--format must be text or csv");
  }
  const auto table = a.fixture.empty() ? load_paper_fixture() : load_results_fixture(a.fixture);
  write_output(a.out, render_table(table, format), out);
  return 0;
}

// ---------------------------------------------------------------- fixtures

struct FixturesArgs {
  bool catalog = false;
  bool dir = false;
};

int run_fixtures(const FixturesArgs& a, std::ostream& out) {
  if (a.catalog) {
    out << catalog_listing();
    return 0;
  }
  if (a.dir) {
    out << fixture_dir().string() << "\n";
    return 0;
  }
  const auto path = fixture_dir() / "table1.csv";
  const auto table = load_results_fixture(path);
  std::size_t populated = 0;
  std::size_t na = 0;
  for (const auto& r : table.rows()) {
    for (const auto& c : r.cells) (c.populated() ? populated : na) += 1;
  }
  out << path.string() << ": " << table.rows().size() << " rows, " << populated << " cells, " << na
      << " NA, checksum ok\n";
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Instruction-level GPU energy toolkit", "instrujoule"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a PTX microbenchmark");
  gen_cmd->add_option("--inst", gen.inst, "Instruction mnemonic, e.g. div.u32");
  gen_cmd->add_option("--variant", gen.variant, "total or overhead");
  gen_cmd->add_option("--iters", gen.iters, "Loop iterations");
  gen_cmd->add_option("--unroll", gen.unroll, "Copies of the instruction per iteration");
  gen_cmd->add_option("--out", gen.out, "Output file, - for stdout");
  gen_cmd->add_flag("--recipe", gen.recipe, "Print the build recipe instead of PTX");
  gen_cmd->add_flag("--meta", gen.meta, "Print kernel metadata and validation as JSON");
  gen_cmd->add_flag("--list", gen.list, "List the instruction catalog");

  MeasureArgs measure;
  auto* measure_cmd = app.add_subcommand("measure", "Measure a workload's energy");
  measure_cmd->add_option("--strategy", measure.strategy, "sma, papi or mtsm")->required();
  measure_cmd->add_option("--provider", measure.provider,
                          "replay:<trace.csv>, synth[:<model.json>], const:<mw> or live")
      ->required();
  measure_cmd->add_option("--workload", measure.workload, "synth:<seconds>[:<label>]");
  measure_cmd->add_option("--label", measure.label, "Workload label");
  measure_cmd->add_option("--out", measure.out, "Result file, - for stdout");
  measure_cmd->add_option("--trace-out", measure.trace_out, "Also write the recorded trace CSV");
  measure_cmd->add_option("--read-cost", measure.read_cost, "Seconds per sensor read (simulated)");
  measure_cmd->add_option("--interval", measure.interval, "SMA sampling interval, seconds");
  measure_cmd->add_option("--lead", measure.lead, "SMA sampling before the workload, seconds");
  measure_cmd->add_option("--tail", measure.tail, "SMA sampling after the workload, seconds");
  measure_cmd->add_option("--start", measure.start, "Workload start on the provider's timeline");
  measure_cmd->add_option("--launch-latency", measure.launch_latency, "Flag set to kernel start, seconds");
  measure_cmd->add_option("--sync-latency", measure.sync_latency, "Kernel end to flag clear, seconds");

  AnalyzeHwArgs hw;
  auto* hw_cmd = app.add_subcommand("analyze-hw", "Hardware power and energy from a capture");
  hw_cmd->add_option("--capture", hw.capture, "Oscilloscope capture CSV")->required();
  hw_cmd->add_option("--window", hw.window, "Kernel window <start>,<end> in seconds");
  hw_cmd->add_option("--out", hw.out, "trace .csv, energy .json, or - for stdout");

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "MAPE/RMSE of predictions against references");
  cmp_cmd->add_option("--pred", cmp.pred, "Predicted results JSON")->required();
  cmp_cmd->add_option("--ref", cmp.ref, "Reference results JSON")->required();
  cmp_cmd->add_option("--out", cmp.out, "Stats JSON, - for stdout");

  ReportArgs rep;
  auto* rep_cmd = app.add_subcommand("report", "Render the results table, plot data or per-instruction energy");
  rep_cmd->add_option("--format", rep.format, "text or csv");
  rep_cmd->add_option("--fixture", rep.fixture, "Results fixture to render instead of the bundled one");
  rep_cmd->add_option("--out", rep.out, "Output file, - for stdout");
  rep_cmd->add_option("--plot", rep.plot, "Emit plot data for a result .json or trace .csv");
  rep_cmd->add_option("--total", rep.total, "Total-kernel energy: mJ or result JSON");
  rep_cmd->add_option("--overhead", rep.overhead, "Overhead-kernel energy: mJ or result JSON");
  rep_cmd->add_option("--instructions", rep.instructions, "Instructions executed by the Total kernel");
  rep_cmd->add_option("--strategy", rep.strategy, "papi or mtsm tag for the result");
  rep_cmd->add_option("--inst", rep.inst, "Instruction mnemonic tag");
  rep_cmd->add_flag("--non-optimized", rep.non_optimized, "Tag the result as an O0 build");

  FixturesArgs fix;
  auto* fix_cmd = app.add_subcommand("fixtures", "Check the bundled fixtures");
  fix_cmd->add_flag("--catalog", fix.catalog, "List the instruction catalog");
  fix_cmd->add_flag("--dir", fix.dir, "Print the fixture directory");

  std::vector<const char*> argv;
  argv.push_back("instrujoule");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen_cmd->parsed()) return run_gen(gen, out);
    if (measure_cmd->parsed()) return run_measure(measure, out);
    if (hw_cmd->parsed()) return run_analyze_hw(hw, out);
    if (cmp_cmd->parsed()) return run_compare(cmp, out);
    if (rep_cmd->parsed()) return run_report(rep, out);
    if (fix_cmd->parsed()) return run_fixtures(fix, out);
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.describe() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace instrujoule
