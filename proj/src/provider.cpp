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

#include "instrujoule/provider.hpp"

#include <algorithm>
#include <cmath>

#include "instrujoule/error.hpp"

namespace instrujoule {

void VirtualClock::advance(double seconds) {
  if (!(seconds >= 0.0)) throw Error(ErrorKind::InvalidArgument, "virtual clock cannot go backwards");
  now_ += seconds;
}

void VirtualClock::advance_to(double t) {
  if (!(t >= now_)) throw Error(ErrorKind::InvalidArgument, "virtual clock cannot go backwards");
  now_ = t;
}

ReplayProvider::ReplayProvider(PowerTrace trace, double offset)
    : trace_(std::move(trace)), offset_(offset) {}

PowerSample ReplayProvider::next_sample(const Clock& clock) {
  const double now = clock.now();
  const double t = now - offset_;
  const auto& s = trace_.samples();
  if (s.empty()) throw Error(ErrorKind::ProviderExhausted, "replay trace is empty");
  if (t > s.back().t) {
    throw Error(ErrorKind::ProviderExhausted,
                "replay queried at t=" + format_g9(t) + " past the last sample at " + format_g9(s.back().t));
  }
  // Queries are usually monotonic; start from the cursor and fall back to a search.
  if (cursor_ >= s.size() || s[cursor_].t > t) {
    auto it = std::upper_bound(s.begin(), s.end(), t,
                               [](double v, const PowerSample& x) { return v < x.t; });
    cursor_ = it == s.begin() ? 0 : static_cast<std::size_t>(it - s.begin()) - 1;
  } else {
    while (cursor_ + 1 < s.size() && s[cursor_ + 1].t <= t) ++cursor_;
  }
  return {now, s[cursor_].power_mw};
}

SyntheticProvider::SyntheticProvider(SyntheticModel model)
    : model_(std::move(model)),
      rng_(model_.rng_seed),
      noise_(0.0, model_.noise_stddev > 0.0 ? model_.noise_stddev : 1.0) {
  validate_model(model_);
}

PowerSample SyntheticProvider::next_sample(const Clock& clock) {
  const double t = clock.now();
  double p = model_power(model_, t);
  if (model_.noise_stddev > 0.0 && on_plateau(model_, t)) p = std::max(0.0, p + noise_(rng_));
  return {t, p};
}

ConstantProvider::ConstantProvider(double power_mw) : power_mw_(power_mw) {
  if (!std::isfinite(power_mw) || power_mw < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "constant power must be finite and >= 0");
  }
}

PowerSample ConstantProvider::next_sample(const Clock& clock) {
  return {clock.now(), power_mw_};
}

LiveProvider::LiveProvider(Reader read_mw) : read_mw_(std::move(read_mw)) {
  if (!read_mw_) throw Error(ErrorKind::SensorUnavailable, "no sensor reader supplied");
}

PowerSample LiveProvider::next_sample(const Clock& clock) {
  const double t = clock.now();
  const auto value = read_mw_();
  if (!value || !std::isfinite(*value) || *value < 0.0) {
    throw Error(ErrorKind::SensorUnavailable, "power sensor read failed");
  }
  return {t, *value};
}

std::unique_ptr<PowerProvider> open_live_provider() {
  throw Error(ErrorKind::SensorUnavailable,
              "no board power sensor binding is available in this build");
}

}  // namespace instrujoule
