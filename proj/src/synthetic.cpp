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

#include "instrujoule/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "instrujoule/error.hpp"

namespace instrujoule {

void validate_model(const SyntheticModel& m) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  auto non_negative = [](double v) { return std::isfinite(v) && v >= 0.0; };
  auto fail = [](const char* what) { throw Error(ErrorKind::InvalidModel, what); };
  if (!non_negative(m.p_idle)) fail("p_idle must be >= 0");
  if (!non_negative(m.p_kernel)) fail("p_kernel must be >= 0");
  if (!non_negative(m.kernel_ramp)) fail("kernel_ramp must be >= 0");
  if (!positive(m.pre_rise_lead)) fail("pre_rise_lead must be > 0");
  if (!positive(m.kernel_duration)) fail("kernel_duration must be > 0");
  if (!positive(m.decay_step_duration)) fail("decay_step_duration must be > 0");
  if (!positive(m.idle_padding)) fail("idle_padding must be > 0");
  if (m.decay_steps < 1) fail("decay_steps must be >= 1");
  if (!non_negative(m.noise_stddev)) fail("noise_stddev must be >= 0");
  if (!positive(m.sample_rate)) fail("sample_rate must be > 0");
  if (1.0 / m.sample_rate > m.idle_padding + m.decay_steps * m.decay_step_duration) {
    fail("sample_rate too low: the kernel end would fall after the last sample");
  }
}

SyntheticLayout layout(const SyntheticModel& m) {
  SyntheticLayout l;
  l.rise = m.idle_padding;
  l.window.start = l.rise + m.pre_rise_lead;
  l.window.end = l.window.start + m.kernel_duration;
  l.decay_end = l.window.end + m.decay_steps * m.decay_step_duration;
  l.end = l.decay_end + m.idle_padding;
  return l;
}

SyntheticTruth synthetic_truth(const SyntheticModel& m) {
  validate_model(m);
  const auto l = layout(m);
  const double d = m.kernel_duration;
  return {l.window, (m.p_idle + m.p_kernel) * d + 0.5 * m.kernel_ramp * d};
}

bool on_plateau(const SyntheticModel& m, double t) {
  const auto l = layout(m);
  return t >= l.rise && t <= l.window.end;
}

double model_power(const SyntheticModel& m, double t) {
  const auto l = layout(m);
  if (t < l.rise) return m.p_idle;
  if (t <= l.window.end) {
    double p = m.p_idle + m.p_kernel;
    if (t >= l.window.start) p += m.kernel_ramp * (t - l.window.start) / m.kernel_duration;
    return p;
  }
  if (t <= l.decay_end) {
    const int steps = m.decay_steps;
    int j = static_cast<int>(std::ceil((t - l.window.end) / m.decay_step_duration));
    j = std::clamp(j, 1, steps);
    return m.p_idle + m.p_kernel * static_cast<double>(steps - j + 1) / (steps + 1);
  }
  return m.p_idle;
}

std::pair<PowerTrace, SyntheticTruth> synthesize(const SyntheticModel& m) {
  const auto truth = synthetic_truth(m);
  const auto l = layout(m);
  std::mt19937_64 rng(m.rng_seed);
  std::normal_distribution<double> noise(0.0, m.noise_stddev > 0.0 ? m.noise_stddev : 1.0);

  const auto n = static_cast<std::size_t>(std::floor(l.end * m.sample_rate));
  std::vector<PowerSample> samples;
  samples.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / m.sample_rate;
    double p = model_power(m, t);
    if (m.noise_stddev > 0.0 && on_plateau(m, t)) p = std::max(0.0, p + noise(rng));
    samples.push_back({t, p});
  }
  return {PowerTrace(std::move(samples), truth.window), truth};
}

}  // namespace instrujoule
