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

#include <functional>
#include <memory>
#include <optional>
#include <random>

#include "instrujoule/clock.hpp"
#include "instrujoule/power_trace.hpp"
#include "instrujoule/synthetic.hpp"

namespace instrujoule {

/// Source of instantaneous power readings.
///
/// Providers are stateful and single-consumer: one sampling activity drives
/// an instance at a time.
class PowerProvider {
 public:
  virtual ~PowerProvider() = default;

  /// Reading at `clock.now()`.
  virtual PowerSample next_sample(const Clock& clock) = 0;
};

/// Replays a recorded trace with zero-order hold: the last sample at or
/// before the query time is returned. Queries before the first sample hold
/// the first sample; queries after the last sample throw ProviderExhausted.
/// `offset` is added to every trace timestamp.
class ReplayProvider final : public PowerProvider {
 public:
  explicit ReplayProvider(PowerTrace trace, double offset = 0.0);

  PowerSample next_sample(const Clock& clock) override;

 private:
  PowerTrace trace_;
  double offset_;
  std::size_t cursor_ = 0;
};

/// Evaluates a SyntheticModel at the clock time. Plateau readings carry
/// Gaussian noise drawn from a generator seeded with the model's seed, so
/// equal read sequences give equal readings.
class SyntheticProvider final : public PowerProvider {
 public:
  explicit SyntheticProvider(SyntheticModel model);

  PowerSample next_sample(const Clock& clock) override;

  const SyntheticModel& model() const noexcept { return model_; }

 private:
  SyntheticModel model_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> noise_;
};

class ConstantProvider final : public PowerProvider {
 public:
  explicit ConstantProvider(double power_mw);

  PowerSample next_sample(const Clock& clock) override;

 private:
  double power_mw_;
};

/// Adapter for a board sensor. `read_mw` returns the current power in
/// milliwatts or nullopt when the sensor cannot be read, which surfaces as
/// SensorUnavailable.
class LiveProvider final : public PowerProvider {
 public:
  using Reader = std::function<std::optional<double>()>;

  explicit LiveProvider(Reader read_mw);

  PowerSample next_sample(const Clock& clock) override;

 private:
  Reader read_mw_;
};

/// Opens the default board sensor. No vendor binding is compiled into this
/// build, so this always throws SensorUnavailable.
std::unique_ptr<PowerProvider> open_live_provider();

}  // namespace instrujoule
