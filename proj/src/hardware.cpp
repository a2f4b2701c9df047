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

#include "instrujoule/hardware.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>

#include "instrujoule/energy.hpp"
#include "instrujoule/error.hpp"

namespace instrujoule {

HwPowerPoint hw_power(const HwChannelSample& s, double r_s) {
  HwPowerPoint p;
  p.t = s.t;
  p.p_pcie_12v = (s.v_s1 - s.v_g1) / r_s * s.v_g1;
  p.p_pcie_3v3 = (s.v_s2 - s.v_g2) / r_s * s.v_g2;
  p.p_dps = s.i_clamp * s.v_dps;
  p.p_total = p.p_pcie_12v + p.p_pcie_3v3 + p.p_dps;
  return p;
}

namespace {

bool finite_row(const HwChannelSample& s) {
  for (double v : {s.t, s.v_s1, s.v_g1, s.v_s2, s.v_g2, s.i_clamp, s.v_dps}) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

// Row checks shared by the constructor and the loader; `line` is 0 for
// in-memory captures.
void check_row(const HwChannelSample& s, const HwChannelSample* prev, double r_s, std::size_t index,
               std::size_t line) {
  const std::string where = line != 0 ? std::string() : "row " + std::to_string(index) + ": ";
  if (!finite_row(s)) throw Error(ErrorKind::MalformedCapture, where + "non-finite value", line);
  if (prev != nullptr && !(s.t > prev->t)) {
    throw Error(ErrorKind::MalformedCapture, where + "non-monotonic timestamp", line);
  }
  if (hw_power(s, r_s).p_total < 0.0) {
    throw Error(ErrorKind::MalformedCapture, where + "negative total power", line);
  }
}

}  // namespace

HwCapture::HwCapture(std::vector<HwChannelSample> samples, double r_s)
    : samples_(std::move(samples)), r_s_(r_s) {
  if (!std::isfinite(r_s) || !(r_s > 0.0)) {
    throw Error(ErrorKind::MalformedCapture, "shunt resistance must be > 0");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    check_row(samples_[i], i > 0 ? &samples_[i - 1] : nullptr, r_s_, i, 0);
  }
}

namespace {

constexpr std::string_view kCaptureHeader = "t_s,v_s1,v_g1,v_s2,v_g2,i_clamp_a,v_dps";
constexpr std::string_view kShuntTag = "# r_s_ohm:";

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

}  // namespace

HwCapture load_hw_capture(std::istream& in) {
  std::optional<double> r_s;
  std::size_t shunt_line = 0;
  bool header_seen = false;
  std::vector<HwChannelSample> rows;
  std::vector<std::size_t> row_lines;
  std::size_t line_no = 0;
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.starts_with(kShuntTag)) {
        r_s = parse_number(line.substr(kShuntTag.size()));
        if (!r_s || !(*r_s > 0.0)) {
          throw Error(ErrorKind::MalformedCapture, "shunt resistance must be a number > 0", line_no);
        }
        shunt_line = line_no;
      }
      continue;
    }
    if (!header_seen) {
      if (line != kCaptureHeader) {
        throw Error(ErrorKind::MalformedCapture,
                    "expected header '" + std::string(kCaptureHeader) + "'", line_no);
      }
      header_seen = true;
      continue;
    }
    std::array<double, 7> v{};
    std::size_t field = 0;
    std::size_t start = 0;
    while (true) {
      auto comma = line.find(',', start);
      auto text = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      if (field >= v.size()) throw Error(ErrorKind::MalformedCapture, "too many fields", line_no);
      auto value = parse_number(text);
      if (!value) {
        throw Error(ErrorKind::MalformedCapture, "unparsable field '" + std::string(trim(text)) + "'",
                    line_no);
      }
      v[field++] = *value;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (field != v.size()) throw Error(ErrorKind::MalformedCapture, "expected 7 fields", line_no);
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6]});
    row_lines.push_back(line_no);
  }
  if (in.bad()) throw Error(ErrorKind::Io, "read error");
  if (!r_s) throw Error(ErrorKind::MissingShunt, "capture has no '# r_s_ohm:' comment");
  if (!header_seen) throw Error(ErrorKind::MalformedCapture, "missing header", line_no + 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    check_row(rows[i], i > 0 ? &rows[i - 1] : nullptr, *r_s, i, row_lines[i]);
  }
  (void)shunt_line;
  return HwCapture(std::move(rows), *r_s);
}

HwCapture load_hw_capture_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open capture file '" + path.string() + "'");
  return load_hw_capture(in);
}

void save_hw_capture(const HwCapture& capture, std::ostream& out) {
  out << kShuntTag << ' ' << format_g9(capture.r_s()) << '\n' << kCaptureHeader << '\n';
  for (const auto& s : capture.samples()) {
    out << format_g9(s.t) << ',' << format_g9(s.v_s1) << ',' << format_g9(s.v_g1) << ','
        << format_g9(s.v_s2) << ',' << format_g9(s.v_g2) << ',' << format_g9(s.i_clamp) << ','
        << format_g9(s.v_dps) << '\n';
  }
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write error");
}

void save_hw_capture_file(const HwCapture& capture, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  save_hw_capture(capture, out);
}

PowerTrace hw_power_trace(const HwCapture& capture) {
  std::vector<PowerSample> samples;
  samples.reserve(capture.samples().size());
  for (const auto& s : capture.samples()) {
    samples.push_back({s.t, hw_power(s, capture.r_s()).p_total * 1000.0});
  }
  return PowerTrace(std::move(samples));
}

double hw_energy(const HwCapture& capture, const KernelWindow& window) {
  validate_window(window);
  const auto& s = capture.samples();
  if (s.empty()) throw Error(ErrorKind::EmptyWindow, "capture is empty");
  if (window.start < s.front().t || window.end > s.back().t) {
    throw Error(ErrorKind::InvalidWindow, "window [" + format_g9(window.start) + ", " +
                                              format_g9(window.end) + "] leaves the capture span [" +
                                              format_g9(s.front().t) + ", " + format_g9(s.back().t) + "]");
  }
  return integrate_energy(hw_power_trace(capture), window);
}

HwCapture capture_from_profile(const PowerTrace& profile, double r_s, const RailSplit& split) {
  const double dps_fraction = 1.0 - split.pcie_12v_fraction - split.pcie_3v3_fraction;
  if (split.pcie_12v_fraction < 0.0 || split.pcie_3v3_fraction < 0.0 || dps_fraction < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "rail fractions must be >= 0 and sum to <= 1");
  }
  std::vector<HwChannelSample> rows;
  rows.reserve(profile.size());
  for (const auto& p : profile.samples()) {
    const double watts = p.power_mw / 1000.0;
    HwChannelSample s;
    s.t = p.t;
    s.v_g1 = split.v_pcie_12v;
    s.v_s1 = s.v_g1 + watts * split.pcie_12v_fraction * r_s / s.v_g1;
    s.v_g2 = split.v_pcie_3v3;
    s.v_s2 = s.v_g2 + watts * split.pcie_3v3_fraction * r_s / s.v_g2;
    s.v_dps = split.v_dps;
    s.i_clamp = watts * dps_fraction / s.v_dps;
    rows.push_back(s);
  }
  return HwCapture(std::move(rows), r_s);
}

}  // namespace instrujoule
