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

#include "instrujoule/json_io.hpp"

#include <nlohmann/json.hpp>

#include "instrujoule/error.hpp"

namespace instrujoule {

using nlohmann::json;

namespace {

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseFailure, std::string("invalid JSON: ") + e.what());
  }
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorKind::ParseFailure, std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::ParseFailure, std::string("field '") + key + "' has the wrong type");
  }
}

template <typename T>
void optional_field(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = field<T>(j, key);
}

Strategy strategy_field(const json& j) {
  const auto name = field<std::string>(j, "strategy");
  auto s = parse_strategy(name);
  if (!s) throw Error(ErrorKind::ParseFailure, "unknown strategy '" + name + "'");
  return *s;
}

}  // namespace

std::string to_json(const EnergyResult& r) {
  json trace = json::array();
  for (const auto& s : r.trace.samples()) trace.push_back({s.t, s.power_mw});
  json j = {
      {"strategy", std::string(to_string(r.strategy))},
      {"energy_mj", r.energy_mj},
      {"elapsed_s", r.elapsed_s},
      {"n_samples", r.n_samples},
      {"label", r.label},
      {"flag_timeline", {{"set", r.flag_timeline.set}, {"clear", r.flag_timeline.clear}}},
      {"workload_window", {{"start", r.workload_window.start}, {"end", r.workload_window.end}}},
      {"trace", std::move(trace)},
  };
  return j.dump(2) + "\n";
}

EnergyResult energy_result_from_json(std::string_view text) {
  const json j = parse(text);
  EnergyResult r;
  r.strategy = strategy_field(j);
  r.energy_mj = field<double>(j, "energy_mj");
  r.elapsed_s = field<double>(j, "elapsed_s");
  r.n_samples = field<std::size_t>(j, "n_samples");
  optional_field(j, "label", r.label);
  if (j.contains("flag_timeline")) {
    const auto& f = j["flag_timeline"];
    r.flag_timeline = {field<double>(f, "set"), field<double>(f, "clear")};
  }
  if (j.contains("workload_window")) {
    const auto& w = j["workload_window"];
    r.workload_window = {field<double>(w, "start"), field<double>(w, "end")};
  }
  if (j.contains("trace")) {
    std::vector<PowerSample> samples;
    try {
      for (const auto& s : j["trace"]) samples.push_back({s.at(0).get<double>(), s.at(1).get<double>()});
    } catch (const json::exception&) {
      throw Error(ErrorKind::ParseFailure, "trace entries must be [t_s, power_mw] pairs");
    }
    r.trace = PowerTrace(std::move(samples));
  }
  return r;
}

std::string to_json(const InstructionEnergy& e) {
  json j = {
      {"instruction", e.spec ? json(e.spec->mnemonic()) : json(nullptr)},
      {"optimized", e.optimized},
      {"strategy", std::string(to_string(e.strategy))},
      {"energy_per_instruction_uj", e.energy_per_instruction_uj},
      {"e_total_mj", e.e_total_mj},
      {"e_overhead_mj", e.e_overhead_mj},
      {"n_instructions", e.n_instructions},
      {"negative_net", e.negative_net},
  };
  return j.dump(2) + "\n";
}

InstructionEnergy instruction_energy_from_json(std::string_view text) {
  const json j = parse(text);
  InstructionEnergy e;
  if (j.contains("instruction") && !j["instruction"].is_null()) {
    e.spec = find_instruction(field<std::string>(j, "instruction"));
  }
  optional_field(j, "optimized", e.optimized);
  e.strategy = strategy_field(j);
  e.energy_per_instruction_uj = field<double>(j, "energy_per_instruction_uj");
  e.e_total_mj = field<double>(j, "e_total_mj");
  e.e_overhead_mj = field<double>(j, "e_overhead_mj");
  e.n_instructions = field<std::uint64_t>(j, "n_instructions");
  optional_field(j, "negative_net", e.negative_net);
  return e;
}

std::string to_json(const SyntheticModel& m) {
  json j = {
      {"p_idle", m.p_idle},
      {"p_kernel", m.p_kernel},
      {"pre_rise_lead", m.pre_rise_lead},
      {"kernel_duration", m.kernel_duration},
      {"decay_steps", m.decay_steps},
      {"decay_step_duration", m.decay_step_duration},
      {"noise_stddev", m.noise_stddev},
      {"sample_rate", m.sample_rate},
      {"rng_seed", m.rng_seed},
      {"idle_padding", m.idle_padding},
      {"kernel_ramp", m.kernel_ramp},
  };
  return j.dump(2) + "\n";
}

SyntheticModel synthetic_model_from_json(std::string_view text) {
  const json j = parse(text);
  if (!j.is_object()) throw Error(ErrorKind::ParseFailure, "model must be a JSON object");
  SyntheticModel m;
  optional_field(j, "p_idle", m.p_idle);
  optional_field(j, "p_kernel", m.p_kernel);
  optional_field(j, "pre_rise_lead", m.pre_rise_lead);
  optional_field(j, "kernel_duration", m.kernel_duration);
  optional_field(j, "decay_steps", m.decay_steps);
  optional_field(j, "decay_step_duration", m.decay_step_duration);
  optional_field(j, "noise_stddev", m.noise_stddev);
  optional_field(j, "sample_rate", m.sample_rate);
  optional_field(j, "rng_seed", m.rng_seed);
  optional_field(j, "idle_padding", m.idle_padding);
  optional_field(j, "kernel_ramp", m.kernel_ramp);
  validate_model(m);
  return m;
}

std::string to_json(const Comparison& c) {
  json items = json::array();
  for (const auto& i : c.items) {
    items.push_back({{"label", i.label},
                     {"pred", i.pred},
                     {"ref", i.ref},
                     {"relative_error_pct", i.relative_error_pct}});
  }
  json j = {
      {"mape_pct", c.stats.mape},
      {"rmse", c.stats.rmse},
      {"normalized_rmse", c.stats.normalized_rmse},
      {"n", c.stats.n},
      {"items", std::move(items)},
  };
  return j.dump(2) + "\n";
}

Comparison comparison_from_json(std::string_view text) {
  const json j = parse(text);
  Comparison c;
  c.stats.mape = field<double>(j, "mape_pct");
  c.stats.rmse = field<double>(j, "rmse");
  c.stats.normalized_rmse = field<double>(j, "normalized_rmse");
  c.stats.n = field<std::size_t>(j, "n");
  if (j.contains("items")) {
    for (const auto& i : j["items"]) {
      c.items.push_back({field<std::string>(i, "label"), field<double>(i, "pred"),
                         field<double>(i, "ref"), field<double>(i, "relative_error_pct")});
    }
  }
  return c;
}

}  // namespace instrujoule
