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
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "instrujoule/clock.hpp"
#include "instrujoule/codegen.hpp"
#include "instrujoule/energy.hpp"
#include "instrujoule/power_trace.hpp"
#include "instrujoule/provider.hpp"

namespace instrujoule {

/// A kernel launch to measure. Simulated workloads only carry a duration;
/// live workloads carry a blocking callable that returns once the kernel
/// has completed (the synchronize barrier).
struct Workload {
  double duration = 0.0;  // seconds, simulated workloads
  std::uint32_t grid_dim = 1;
  std::uint32_t block_dim = 1;
  std::string label;
  std::function<void()> run;

  bool is_simulated() const noexcept { return !run; }

  static Workload simulated(double seconds, std::string label = {});
  static Workload live(std::function<void()> run, std::string label = {});
};

enum class SamplerMode { FixedInterval, MaxRate };

struct SamplerConfig {
  SamplerMode mode = SamplerMode::FixedInterval;
  double interval = 0.015;  // seconds between sensor calls

  static SamplerConfig fixed(double seconds) { return {SamplerMode::FixedInterval, seconds}; }
  static SamplerConfig max_rate() { return {SamplerMode::MaxRate, 0.0}; }
};

struct FlagTimeline {
  double set = 0.0;
  double clear = 0.0;
};

struct EnergyResult {
  Strategy strategy = Strategy::MTSM;
  double energy_mj = 0.0;
  double elapsed_s = 0.0;
  std::size_t n_samples = 0;
  PowerTrace trace;            // readings that went into the energy
  FlagTimeline flag_timeline;  // sampling gate (MTSM) or start/stop (PAPI)
  KernelWindow workload_window;
  std::string label;
};

/// Cost model of the simulated host. Each sensor call takes `read_cost`
/// seconds, which bounds the unthrottled MTSM rate (0.5 ms gives ~2 kHz).
struct SimOptions {
  double read_cost = 0.0005;
  double launch_latency = 0.0;  // flag set -> kernel start
  double sync_latency = 0.0;    // kernel end -> flag clear
};

/// Fixed-interval background sampling over lead + workload + tail. Returns
/// the raw trace only: nothing in it delimits the kernel, so no energy is
/// derived from it. Requires SamplerMode::FixedInterval.
PowerTrace run_sma(PowerProvider& provider, const Workload& workload, const SamplerConfig& config,
                   double lead, double tail, VirtualClock& clock);
PowerTrace run_sma(PowerProvider& provider, const Workload& workload, const SamplerConfig& config,
                   double lead, double tail, const SteadyClock& clock);

/// One reading after the workload completes, multiplied by the elapsed time.
EnergyResult run_papi_style(PowerProvider& provider, const Workload& workload, VirtualClock& clock,
                            const SimOptions& options = {});
EnergyResult run_papi_style(PowerProvider& provider, const Workload& workload,
                            const SteadyClock& clock);

/// Flag-gated unthrottled sampling around the workload; energy from the
/// recorded readings. The simulated overload interleaves sampler and
/// workload on one thread with the virtual clock; the live overload runs a
/// sampler thread gated by an atomic flag. Throws SamplerStartupFailure if
/// no reading can be taken before the workload starts.
EnergyResult run_mtsm(PowerProvider& provider, const Workload& workload, VirtualClock& clock,
                      const SimOptions& options = {});
EnergyResult run_mtsm(PowerProvider& provider, const Workload& workload, const SteadyClock& clock);

using ProviderFactory = std::function<std::unique_ptr<PowerProvider>(KernelVariant)>;

struct MeasureOptions {
  SimOptions sim;
  double start_time = 0.0;  // virtual clock start for each run
  std::optional<InstructionSpec> spec;
  bool optimized = true;
};

struct InstructionMeasurement {
  InstructionEnergy energy;
  EnergyResult total;
  EnergyResult overhead;
};

/// Measures the Total and Overhead workloads with fresh providers and
/// virtual clocks, then derives the per-instruction energy. A negative net
/// is flagged on the result, never clamped. `strategy` must be PapiStyle
/// or MTSM.
InstructionMeasurement measure_instruction(const ProviderFactory& factory, const Workload& total,
                                           const Workload& overhead, std::uint64_t n_instructions,
                                           Strategy strategy, const MeasureOptions& options = {});

}  // namespace instrujoule
