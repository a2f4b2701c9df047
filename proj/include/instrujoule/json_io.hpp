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

#pragma once

#include <string>
#include <string_view>

#include "instrujoule/analysis.hpp"
#include "instrujoule/energy.hpp"
#include "instrujoule/monitor.hpp"
#include "instrujoule/synthetic.hpp"

namespace instrujoule {

// JSON documents exchanged between CLI steps. Readers throw ParseFailure on
// malformed JSON or missing/mistyped fields.
//
// EnergyResult: {"strategy", "energy_mj", "elapsed_s", "n_samples", "label",
//   "flag_timeline": {"set", "clear"}, "workload_window": {"start", "end"},
//   "trace": [[t_s, power_mw], ...]}
// InstructionEnergy: {"instruction" (mnemonic or null), "optimized",
//   "strategy", "energy_per_instruction_uj", "e_total_mj", "e_overhead_mj",
//   "n_instructions", "negative_net"}
// SyntheticModel: one key per field, all optional; missing keys keep the
//   defaults.
// Comparison: {"mape_pct", "rmse", "normalized_rmse", "n",
//   "items": [{"label", "pred", "ref", "relative_error_pct"}]}

std::string to_json(const EnergyResult& result);
std::string to_json(const InstructionEnergy& energy);
std::string to_json(const SyntheticModel& model);
std::string to_json(const Comparison& comparison);

EnergyResult energy_result_from_json(std::string_view text);
InstructionEnergy instruction_energy_from_json(std::string_view text);
SyntheticModel synthetic_model_from_json(std::string_view text);
Comparison comparison_from_json(std::string_view text);

}  // namespace instrujoule
