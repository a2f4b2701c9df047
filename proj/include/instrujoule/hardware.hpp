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
#include <vector>

#include "instrujoule/power_trace.hpp"

namespace instrujoule {

/// One oscilloscope row. The (v_s1, v_g1) shunt senses the PCI-E 12 V rail,
/// (v_s2, v_g2) the PCI-E 3.3 V rail, and the clamp meter the direct supply.
struct HwChannelSample {
  double t = 0.0;        // s
  double v_s1 = 0.0;     // V, supply side of the 12 V shunt
  double v_g1 = 0.0;     // V, card side of the 12 V shunt
  double v_s2 = 0.0;     // V, supply side of the 3.3 V shunt
  double v_g2 = 0.0;     // V, card side of the 3.3 V shunt
  double i_clamp = 0.0;  // A, direct supply current
  double v_dps = 0.0;    // V, direct supply voltage

  friend bool operator==(const HwChannelSample&, const HwChannelSample&) = default;
};

/// Six-channel capture plus the shunt resistance shared by both rails.
/// Construction rejects non-finite values, non-increasing time, r_s <= 0
/// and rows whose total power is negative (MalformedCapture).
class HwCapture {
 public:
  HwCapture() = default;
  HwCapture(std::vector<HwChannelSample> samples, double r_s);

  const std::vector<HwChannelSample>& samples() const noexcept { return samples_; }
  double r_s() const noexcept { return r_s_; }

 private:
  std::vector<HwChannelSample> samples_;
  double r_s_ = 0.0;
};

/// Per-source power in watts.
struct HwPowerPoint {
  double t = 0.0;
  double p_pcie_12v = 0.0;
  double p_pcie_3v3 = 0.0;
  double p_dps = 0.0;
  double p_total = 0.0;
};

/// Shunt current times card-side voltage for each PCI-E rail, plus clamp
/// current times supply voltage.
HwPowerPoint hw_power(const HwChannelSample& sample, double r_s);

/// CSV with a `# r_s_ohm: <value>` comment and the header
/// `t_s,v_s1,v_g1,v_s2,v_g2,i_clamp_a,v_dps`. Throws MalformedCapture (with
/// line number) or MissingShunt.
HwCapture load_hw_capture(std::istream& in);
HwCapture load_hw_capture_file(const std::filesystem::path& path);
void save_hw_capture(const HwCapture& capture, std::ostream& out);
void save_hw_capture_file(const HwCapture& capture, const std::filesystem::path& path);

/// Total power per row, in milliwatts.
PowerTrace hw_power_trace(const HwCapture& capture);

/// Sample-mean energy (mJ) of the hardware power over the window. Throws
/// InvalidWindow when the window leaves the capture span, EmptyWindow when
/// no row falls inside.
double hw_energy(const HwCapture& capture, const KernelWindow& window);

/// How a target power is split across the three sources when building a
/// capture from a power profile.
struct RailSplit {
  double pcie_12v_fraction = 0.10;
  double pcie_3v3_fraction = 0.02;
  double v_pcie_12v = 12.0;
  double v_pcie_3v3 = 3.3;
  double v_dps = 12.0;
};

/// Channel values that reproduce `profile` (mW) through hw_power.
HwCapture capture_from_profile(const PowerTrace& profile, double r_s, const RailSplit& split = {});

}  // namespace instrujoule
