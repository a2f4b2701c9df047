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
#include <utility>

#include "instrujoule/power_trace.hpp"

namespace instrujoule {

/// Parametric power profile with a known kernel window.
///
/// Shape over time: idle for `idle_padding`, a step up to the kernel plateau
/// `pre_rise_lead` seconds before the kernel starts, the plateau for the
/// kernel duration (optionally rising linearly by `kernel_ramp`), then
/// `decay_steps` equal-height steps of `decay_step_duration` each back to
/// idle, and a final idle stretch of `idle_padding`.
struct SyntheticModel {
  double p_idle = 20000.0;         // mW
  double p_kernel = 80000.0;       // mW above idle
  double pre_rise_lead = 0.005;    // s
  double kernel_duration = 2.0;    // s
  int decay_steps = 3;
  double decay_step_duration = 0.5;  // s
  double noise_stddev = 0.0;       // mW, Gaussian, plateau only
  double sample_rate = 2000.0;     // Hz
  std::uint64_t rng_seed = 42;
  double idle_padding = 0.5;       // s
  double kernel_ramp = 0.0;        // mW gained linearly across the kernel

  friend bool operator==(const SyntheticModel&, const SyntheticModel&) = default;
};

struct SyntheticTruth {
  KernelWindow window;
  double true_energy_mj = 0.0;  // noise-free integral over the window
};

/// Key instants of the profile, seconds from the trace start.
struct SyntheticLayout {
  double rise = 0.0;
  KernelWindow window;
  double decay_end = 0.0;
  double end = 0.0;
};

/// Throws InvalidModel if any duration is not positive, a power or the noise
/// is negative, the sample rate is not positive or decay_steps < 1.
void validate_model(const SyntheticModel& model);

SyntheticLayout layout(const SyntheticModel& model);
SyntheticTruth synthetic_truth(const SyntheticModel& model);

/// Noise-free power at time t (mW).
double model_power(const SyntheticModel& model, double t);

/// True while t lies on the kernel plateau (rise through kernel end).
bool on_plateau(const SyntheticModel& model, double t);

/// Samples the profile at `sample_rate` from t = 0 to the end of the idle
/// tail, adding seeded noise on the plateau. The returned trace is annotated
/// with the kernel window.
std::pair<PowerTrace, SyntheticTruth> synthesize(const SyntheticModel& model);

}  // namespace instrujoule
