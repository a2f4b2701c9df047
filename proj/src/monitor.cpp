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

#include "instrujoule/monitor.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>
#include <vector>

#include "instrujoule/error.hpp"

namespace instrujoule {

Workload Workload::simulated(double seconds, std::string label) {
  Workload w;
  w.duration = seconds;
  w.label = std::move(label);
  return w;
}

Workload Workload::live(std::function<void()> run, std::string label) {
  Workload w;
  w.run = std::move(run);
  w.label = std::move(label);
  return w;
}

namespace {

void require_simulated(const Workload& w) {
  if (!w.is_simulated()) {
    throw Error(ErrorKind::InvalidArgument, "a live workload cannot run on the virtual clock");
  }
  if (!std::isfinite(w.duration) || !(w.duration > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "simulated workload duration must be > 0");
  }
}

void require_live(const Workload& w) {
  if (w.is_simulated()) {
    throw Error(ErrorKind::InvalidArgument, "a simulated workload cannot run on the real clock");
  }
}

void require_sma_args(const SamplerConfig& config, double lead, double tail) {
  if (config.mode != SamplerMode::FixedInterval || !(config.interval > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "SMA needs a fixed sampling interval > 0");
  }
  if (!(lead >= 0.0) || !(tail >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "lead and tail must be >= 0");
  }
}

std::vector<double> powers_of(const std::vector<PowerSample>& samples) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.power_mw);
  return out;
}

// Readings from different sources may repeat a timestamp; PowerTrace needs
// strictly increasing times, so keep the first reading of a run of equals.
std::vector<PowerSample> strictly_increasing(std::vector<PowerSample> samples) {
  std::vector<PowerSample> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    if (out.empty() || s.t > out.back().t) out.push_back(s);
  }
  return out;
}

void sleep_seconds(double seconds) {
  if (seconds > 0.0) std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
}

}  // namespace

PowerTrace run_sma(PowerProvider& provider, const Workload& workload, const SamplerConfig& config,
                   double lead, double tail, VirtualClock& clock) {
  require_simulated(workload);
  require_sma_args(config, lead, tail);
  const double t0 = clock.now();
  const double t_end = t0 + lead + workload.duration + tail;
  std::vector<PowerSample> samples;
  for (std::size_t k = 0;; ++k) {
    double t = t0 + static_cast<double>(k) * config.interval;
    if (t > t_end) {
      if (t - t_end > 1e-9 * config.interval) break;
      t = t_end;
    }
    clock.advance_to(t);
    samples.push_back(provider.next_sample(clock));
    if (t == t_end) break;
  }
  clock.advance_to(t_end);
  return PowerTrace(std::move(samples));
}

PowerTrace run_sma(PowerProvider& provider, const Workload& workload, const SamplerConfig& config,
                   double lead, double tail, const SteadyClock& clock) {
  require_live(workload);
  require_sma_args(config, lead, tail);
  std::atomic<bool> stop{false};
  std::vector<PowerSample> samples;
  std::exception_ptr error;
  std::thread sampler([&] {
    try {
      double next = clock.now();
      while (!stop.load()) {
        samples.push_back(provider.next_sample(clock));
        next += config.interval;
        sleep_seconds(next - clock.now());
      }
    } catch (...) {
      error = std::current_exception();
    }
  });
  try {
    sleep_seconds(lead);
    workload.run();
    sleep_seconds(tail);
  } catch (...) {
    stop.store(true);
    sampler.join();
    throw;
  }
  stop.store(true);
  sampler.join();
  if (error) std::rethrow_exception(error);
  return PowerTrace(strictly_increasing(std::move(samples)));
}

EnergyResult run_papi_style(PowerProvider& provider, const Workload& workload, VirtualClock& clock,
                            const SimOptions& options) {
  require_simulated(workload);
  EnergyResult r;
  r.strategy = Strategy::PapiStyle;
  r.label = workload.label;
  const double papi_start = clock.now();
  r.workload_window = {papi_start + options.launch_latency,
                       papi_start + options.launch_latency + workload.duration};
  const double papi_end = r.workload_window.end + options.sync_latency;
  clock.advance_to(papi_end);
  const auto reading = provider.next_sample(clock);
  r.elapsed_s = papi_end - papi_start;
  r.energy_mj = reading.power_mw * r.elapsed_s;
  r.n_samples = 1;
  r.trace = PowerTrace({reading});
  r.flag_timeline = {papi_start, papi_end};
  return r;
}

EnergyResult run_papi_style(PowerProvider& provider, const Workload& workload,
                            const SteadyClock& clock) {
  require_live(workload);
  EnergyResult r;
  r.strategy = Strategy::PapiStyle;
  r.label = workload.label;
  const double papi_start = clock.now();
  workload.run();
  const double papi_end = clock.now();
  const auto reading = provider.next_sample(clock);
  r.workload_window = {papi_start, papi_end};
  r.elapsed_s = papi_end - papi_start;
  r.energy_mj = reading.power_mw * r.elapsed_s;
  r.n_samples = 1;
  r.trace = PowerTrace({reading});
  r.flag_timeline = {papi_start, papi_end};
  return r;
}

EnergyResult run_mtsm(PowerProvider& provider, const Workload& workload, VirtualClock& clock,
                      const SimOptions& options) {
  require_simulated(workload);
  if (!(options.read_cost > 0.0) || !(options.launch_latency >= 0.0) ||
      !(options.sync_latency >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "read_cost must be > 0 and latencies >= 0");
  }
  // Algorithm order: flag set, timer start + launch, synchronize + timer
  // stop, flag clear, join. The sampler reads back to back from flag set
  // until it observes the clear.
  const double flag_set = clock.now();
  const double kernel_start = flag_set + options.launch_latency;
  const double kernel_end = kernel_start + workload.duration;
  const double flag_clear = kernel_end + options.sync_latency;

  std::vector<PowerSample> readings;
  for (std::size_t k = 0;; ++k) {
    const double t = flag_set + static_cast<double>(k) * options.read_cost;
    if (t > flag_clear) break;
    clock.advance_to(t);
    try {
      readings.push_back(provider.next_sample(clock));
    } catch (const Error& e) {
      if (k == 0) {
        throw Error(ErrorKind::SamplerStartupFailure,
                    "first reading failed: " + e.describe());
      }
      throw;
    }
  }
  clock.advance_to(flag_clear);

  EnergyResult r;
  r.strategy = Strategy::MTSM;
  r.label = workload.label;
  r.elapsed_s = kernel_end - kernel_start;
  r.energy_mj = energy_from_readings(powers_of(readings), r.elapsed_s);
  r.n_samples = readings.size();
  r.trace = PowerTrace(std::move(readings));
  r.flag_timeline = {flag_set, flag_clear};
  r.workload_window = {kernel_start, kernel_end};
  return r;
}

EnergyResult run_mtsm(PowerProvider& provider, const Workload& workload, const SteadyClock& clock) {
  require_live(workload);
  std::atomic<bool> flag{false};
  std::atomic<bool> abandon{false};
  std::atomic<bool> first_taken{false};
  std::atomic<bool> failed{false};
  std::vector<PowerSample> buffer;  // owned by the sampler until join
  std::exception_ptr error;

  std::thread sampler([&] {
    while (!flag.load()) {
      if (abandon.load()) return;
      std::this_thread::yield();
    }
    try {
      while (flag.load()) {
        buffer.push_back(provider.next_sample(clock));
        if (buffer.size() == 1) first_taken.store(true);
      }
    } catch (...) {
      error = std::current_exception();
      failed.store(true);
    }
  });

  const double flag_set = clock.now();
  flag.store(true);

  const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(5);
  while (!first_taken.load() && !failed.load() && std::chrono::steady_clock::now() < deadline) {
    std::this_thread::yield();
  }
  if (!first_taken.load()) {
    flag.store(false);
    abandon.store(true);
    sampler.join();
    std::string why = "no reading before kernel start";
    if (error) {
      try {
        std::rethrow_exception(error);
      } catch (const Error& e) {
        why = e.describe();
      } catch (const std::exception& e) {
        why = e.what();
      }
    }
    throw Error(ErrorKind::SamplerStartupFailure, why);
  }

  double kernel_start = 0.0;
  double kernel_end = 0.0;
  try {
    kernel_start = clock.now();
    workload.run();
    kernel_end = clock.now();
  } catch (...) {
    flag.store(false);
    sampler.join();
    throw;
  }
  flag.store(false);
  const double flag_clear = clock.now();
  sampler.join();
  if (error) std::rethrow_exception(error);

  // A read that began just before the clear may be stamped after it.
  std::vector<PowerSample> kept;
  for (const auto& s : buffer) {
    if (s.t >= flag_set && s.t <= flag_clear) kept.push_back(s);
  }
  kept = strictly_increasing(std::move(kept));

  EnergyResult r;
  r.strategy = Strategy::MTSM;
  r.label = workload.label;
  r.elapsed_s = kernel_end - kernel_start;
  r.energy_mj = energy_from_readings(powers_of(kept), r.elapsed_s);
  r.n_samples = kept.size();
  r.trace = PowerTrace(std::move(kept));
  r.flag_timeline = {flag_set, flag_clear};
  r.workload_window = {kernel_start, kernel_end};
  return r;
}

InstructionMeasurement measure_instruction(const ProviderFactory& factory, const Workload& total,
                                           const Workload& overhead, std::uint64_t n_instructions,
                                           Strategy strategy, const MeasureOptions& options) {
  if (n_instructions == 0) throw Error(ErrorKind::ZeroInstructions, "instruction count is zero");
  if (strategy == Strategy::SMA) {
    throw Error(ErrorKind::InvalidArgument, "SMA produces no kernel energy; use PAPI or MTSM");
  }
  auto run = [&](KernelVariant variant, const Workload& w) {
    auto provider = factory(variant);
    if (!provider) throw Error(ErrorKind::SensorUnavailable, "provider factory returned nothing");
    VirtualClock clock(options.start_time);
    return strategy == Strategy::MTSM ? run_mtsm(*provider, w, clock, options.sim)
                                      : run_papi_style(*provider, w, clock, options.sim);
  };
  InstructionMeasurement m;
  m.total = run(KernelVariant::Total, total);
  m.overhead = run(KernelVariant::Overhead, overhead);
  m.energy = make_instruction_energy(m.total.energy_mj, m.overhead.energy_mj, n_instructions,
                                     strategy, options.optimized, options.spec);
  return m;
}

}  // namespace instrujoule
