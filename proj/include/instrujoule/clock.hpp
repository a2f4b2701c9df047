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

#include <chrono>

namespace instrujoule {

/// Seconds on a monotonic timeline.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual double now() const = 0;
};

/// Deterministic simulation clock. Time only moves when told to.
/// Not thread-safe; one simulated measurement drives it.
class VirtualClock final : public Clock {
 public:
  explicit VirtualClock(double start = 0.0) : now_(start) {}

  double now() const override { return now_; }

  void advance(double seconds);
  /// Moves to `t`; throws InvalidArgument if that would go backwards.
  void advance_to(double t);

 private:
  double now_;
};

/// Wall-clock time from std::chrono::steady_clock, as seconds since
/// construction plus `origin`. Safe to read from several threads.
class SteadyClock final : public Clock {
 public:
  explicit SteadyClock(double origin = 0.0)
      : origin_(origin), epoch_(std::chrono::steady_clock::now()) {}

  double now() const override {
    return origin_ + std::chrono::duration<double>(std::chrono::steady_clock::now() - epoch_).count();
  }

 private:
  double origin_;
  std::chrono::steady_clock::time_point epoch_;
};

}  // namespace instrujoule
