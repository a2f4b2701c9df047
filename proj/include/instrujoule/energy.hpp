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

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "instrujoule/catalog.hpp"
#include "instrujoule/power_trace.hpp"

namespace instrujoule {

enum class Strategy { SMA, PapiStyle, MTSM };

std::string_view to_string(Strategy strategy) noexcept;
std::optional<Strategy> parse_strategy(std::string_view text) noexcept;

inline constexpr double mj_to_uj(double mj) noexcept { return mj * 1000.0; }
inline constexpr double uj_to_mj(double uj) noexcept { return uj / 1000.0; }

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double value) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Area under the curve from raw readings: elapsed / N * sum(power_i).
/// Result in millijoules for milliwatt readings and an elapsed time in
/// seconds. Throws EmptyWindow when there are no readings.
double energy_from_readings(std::span<const double> power_mw, double elapsed_s);

/// Energy of the samples whose timestamps fall in the closed window,
/// using the sample mean times the window length. Throws EmptyWindow when
/// no sample lies inside and InvalidWindow for a degenerate window.
double integrate_energy(const PowerTrace& trace, const KernelWindow& window);

/// Trapezoidal rule over the in-window samples, holding the first and last
/// in-window values out to the window edges. Cross-check only.
double integrate_energy_trapezoid(const PowerTrace& trace, const KernelWindow& window);

struct PerInstructionEnergy {
  double microjoules = 0.0;
  bool negative_net = false;  // overhead exceeded total; value is kept negative
};

/// (e_total - e_overhead) / n_instructions, converted from mJ to uJ.
/// Throws ZeroInstructions when n_instructions is 0.
PerInstructionEnergy instruction_energy(double e_total_mj, double e_overhead_mj,
                                        std::uint64_t n_instructions);

/// Per-instruction energy together with the inputs it came from.
struct InstructionEnergy {
  std::optional<InstructionSpec> spec;
  bool optimized = true;  // O3 run tag; false for O0
  Strategy strategy = Strategy::MTSM;
  double energy_per_instruction_uj = 0.0;
  double e_total_mj = 0.0;
  double e_overhead_mj = 0.0;
  std::uint64_t n_instructions = 0;
  bool negative_net = false;
};

InstructionEnergy make_instruction_energy(double e_total_mj, double e_overhead_mj,
                                          std::uint64_t n_instructions, Strategy strategy,
                                          bool optimized = true,
                                          std::optional<InstructionSpec> spec = std::nullopt);

}  // namespace instrujoule
