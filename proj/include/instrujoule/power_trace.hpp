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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace instrujoule {

/// One sensor reading. Times are seconds relative to the trace start; power
/// is milliwatts.
struct PowerSample {
  double t = 0.0;
  double power_mw = 0.0;

  friend bool operator==(const PowerSample&, const PowerSample&) = default;
};

/// [start, end] of a kernel's execution inside a trace, in seconds.
struct KernelWindow {
  double start = 0.0;
  double end = 0.0;

  double duration() const noexcept { return end - start; }
  bool contains(double t) const noexcept { return t >= start && t <= end; }

  friend bool operator==(const KernelWindow&, const KernelWindow&) = default;
};

/// Throws InvalidWindow unless both bounds are finite and end > start.
void validate_window(const KernelWindow& window);

/// Immutable, time-ordered power series with an optional kernel window.
///
/// Construction enforces: strictly increasing finite times, finite
/// non-negative power, and a window (if any) lying within the sample span.
/// Violations throw MalformedTrace.
class PowerTrace {
 public:
  PowerTrace() = default;
  explicit PowerTrace(std::vector<PowerSample> samples,
                      std::optional<KernelWindow> window = std::nullopt);

  const std::vector<PowerSample>& samples() const noexcept { return samples_; }
  const std::optional<KernelWindow>& window() const noexcept { return window_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

  PowerTrace with_window(std::optional<KernelWindow> window) const;

  /// Every power value multiplied by `factor` (>= 0).
  PowerTrace scaled(double factor) const;

  friend bool operator==(const PowerTrace&, const PowerTrace&) = default;

 private:
  std::vector<PowerSample> samples_;
  std::optional<KernelWindow> window_;
};

/// Reads the trace CSV: an optional `# window: <start>,<end>` line, the
/// header `t_s,power_mw`, then one `t,power` row per line. Errors throw
/// MalformedTrace with the offending 1-based line number.
PowerTrace load_trace(std::istream& in);
PowerTrace load_trace_file(const std::filesystem::path& path);

/// Writes the same format with `%.9g` numbers. Throws Io on stream failure.
void save_trace(const PowerTrace& trace, std::ostream& out);
void save_trace_file(const PowerTrace& trace, const std::filesystem::path& path);

/// `%.9g` rendering shared by every CSV writer in the toolkit.
std::string format_g9(double value);

}  // namespace instrujoule
