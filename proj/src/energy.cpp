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

#include "instrujoule/energy.hpp"

#include <cmath>
#include <vector>

#include "instrujoule/error.hpp"

namespace instrujoule {

std::string_view to_string(Strategy strategy) noexcept {
  switch (strategy) {
    case Strategy::SMA: return "SMA";
    case Strategy::PapiStyle: return "PAPI";
    case Strategy::MTSM: return "MTSM";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view text) noexcept {
  if (text == "sma" || text == "SMA") return Strategy::SMA;
  if (text == "papi" || text == "PAPI") return Strategy::PapiStyle;
  if (text == "mtsm" || text == "MTSM") return Strategy::MTSM;
  return std::nullopt;
}

void CompensatedSum::add(double value) noexcept {
  const double t = sum_ + value;
  if (std::abs(sum_) >= std::abs(value)) {
    compensation_ += (sum_ - t) + value;
  } else {
    compensation_ += (value - t) + sum_;
  }
  sum_ = t;
}

double energy_from_readings(std::span<const double> power_mw, double elapsed_s) {
  if (power_mw.empty()) throw Error(ErrorKind::EmptyWindow, "no power readings to integrate");
  // Mean taken about the first reading, so a flat trace integrates to
  // exactly reading * elapsed with no rounding drift from N * p / N.
  const double base = power_mw.front();
  CompensatedSum deviation;
  for (double p : power_mw) deviation.add(p - base);
  const double mean = base + deviation.value() / static_cast<double>(power_mw.size());
  return mean * elapsed_s;
}

double integrate_energy(const PowerTrace& trace, const KernelWindow& window) {
  validate_window(window);
  std::vector<double> inside;
  for (const auto& s : trace.samples()) {
    if (window.contains(s.t)) inside.push_back(s.power_mw);
  }
  if (inside.empty()) {
    throw Error(ErrorKind::EmptyWindow, "no samples in [" + format_g9(window.start) + ", " +
                                            format_g9(window.end) + "]");
  }
  return energy_from_readings(inside, window.duration());
}

double integrate_energy_trapezoid(const PowerTrace& trace, const KernelWindow& window) {
  validate_window(window);
  const PowerSample* prev = nullptr;
  CompensatedSum area;
  for (const auto& s : trace.samples()) {
    if (!window.contains(s.t)) continue;
    if (prev == nullptr) {
      area.add(s.power_mw * (s.t - window.start));
    } else {
      area.add(0.5 * (prev->power_mw + s.power_mw) * (s.t - prev->t));
    }
    prev = &s;
  }
  if (prev == nullptr) {
    throw Error(ErrorKind::EmptyWindow, "no samples in [" + format_g9(window.start) + ", " +
                                            format_g9(window.end) + "]");
  }
  area.add(prev->power_mw * (window.end - prev->t));
  return area.value();
}

PerInstructionEnergy instruction_energy(double e_total_mj, double e_overhead_mj,
                                        std::uint64_t n_instructions) {
  if (n_instructions == 0) throw Error(ErrorKind::ZeroInstructions, "instruction count is zero");
  const double net = e_total_mj - e_overhead_mj;
  return {net / static_cast<double>(n_instructions) * 1000.0, net < 0.0};
}

InstructionEnergy make_instruction_energy(double e_total_mj, double e_overhead_mj,
                                          std::uint64_t n_instructions, Strategy strategy,
                                          bool optimized, std::optional<InstructionSpec> spec) {
  const auto per = instruction_energy(e_total_mj, e_overhead_mj, n_instructions);
  InstructionEnergy e;
  e.spec = std::move(spec);
  e.optimized = optimized;
  e.strategy = strategy;
  e.energy_per_instruction_uj = per.microjoules;
  e.e_total_mj = e_total_mj;
  e.e_overhead_mj = e_overhead_mj;
  e.n_instructions = n_instructions;
  e.negative_net = per.negative_net;
  return e;
}

}  // namespace instrujoule
