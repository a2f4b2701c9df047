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

#include "instrujoule/power_trace.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "instrujoule/error.hpp"

namespace instrujoule {

void validate_window(const KernelWindow& window) {
  if (!std::isfinite(window.start) || !std::isfinite(window.end) || !(window.end > window.start)) {
    throw Error(ErrorKind::InvalidWindow, "window end must be after start (got " +
                                             format_g9(window.start) + "," +
                                             format_g9(window.end) + ")");
  }
}

PowerTrace::PowerTrace(std::vector<PowerSample> samples, std::optional<KernelWindow> window)
    : samples_(std::move(samples)), window_(window) {
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (!std::isfinite(s.t)) {
      throw Error(ErrorKind::MalformedTrace, "sample " + std::to_string(i) + ": time is not finite");
    }
    if (!std::isfinite(s.power_mw) || s.power_mw < 0.0) {
      throw Error(ErrorKind::MalformedTrace,
                  "sample " + std::to_string(i) + ": power must be finite and non-negative");
    }
    if (i > 0 && !(s.t > samples_[i - 1].t)) {
      throw Error(ErrorKind::MalformedTrace,
                  "sample " + std::to_string(i) + ": timestamps must be strictly increasing");
    }
  }
  if (window_) {
    if (!std::isfinite(window_->start) || !std::isfinite(window_->end) ||
        !(window_->end > window_->start)) {
      throw Error(ErrorKind::MalformedTrace, "window end must be after window start");
    }
    if (samples_.empty() || window_->start < samples_.front().t ||
        window_->end > samples_.back().t) {
      throw Error(ErrorKind::MalformedTrace, "window lies outside the sampled span");
    }
  }
}

PowerTrace PowerTrace::with_window(std::optional<KernelWindow> window) const {
  return PowerTrace(samples_, window);
}

PowerTrace PowerTrace::scaled(double factor) const {
  auto copy = samples_;
  for (auto& s : copy) s.power_mw *= factor;
  return PowerTrace(std::move(copy), window_);
}

std::string format_g9(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

namespace {

constexpr std::string_view kHeader = "t_s,power_mw";
constexpr std::string_view kWindowTag = "# window:";

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_number(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

bool parse_pair(std::string_view text, double& a, double& b) {
  auto comma = text.find(',');
  if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
    return false;
  }
  return parse_number(text.substr(0, comma), a) && parse_number(text.substr(comma + 1), b);
}

}  // namespace

PowerTrace load_trace(std::istream& in) {
  std::vector<PowerSample> samples;
  std::optional<KernelWindow> window;
  std::size_t window_line = 0;
  bool header_seen = false;
  std::size_t line_no = 0;
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (!header_seen && line.starts_with(kWindowTag)) {
        double a = 0, b = 0;
        if (!parse_pair(line.substr(kWindowTag.size()), a, b)) {
          throw Error(ErrorKind::MalformedTrace, "unparsable window comment", line_no);
        }
        if (!(b > a)) throw Error(ErrorKind::MalformedTrace, "window end must be after start", line_no);
        window = KernelWindow{a, b};
        window_line = line_no;
      }
      continue;
    }
    if (!header_seen) {
      if (line != kHeader) {
        throw Error(ErrorKind::MalformedTrace,
                    "expected header '" + std::string(kHeader) + "', got '" + std::string(line) + "'",
                    line_no);
      }
      header_seen = true;
      continue;
    }
    PowerSample s;
    if (!parse_pair(line, s.t, s.power_mw)) {
      throw Error(ErrorKind::MalformedTrace, "unparsable sample '" + std::string(line) + "'", line_no);
    }
    if (s.power_mw < 0.0) throw Error(ErrorKind::MalformedTrace, "negative power", line_no);
    if (!samples.empty() && !(s.t > samples.back().t)) {
      throw Error(ErrorKind::MalformedTrace, "non-monotonic timestamp", line_no);
    }
    samples.push_back(s);
  }
  if (in.bad()) throw Error(ErrorKind::Io, "read error");
  if (!header_seen) throw Error(ErrorKind::MalformedTrace, "missing header", line_no + 1);
  if (window && (samples.empty() || window->start < samples.front().t ||
                 window->end > samples.back().t)) {
    throw Error(ErrorKind::MalformedTrace, "window lies outside the sampled span", window_line);
  }
  return PowerTrace(std::move(samples), window);
}

PowerTrace load_trace_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open trace file '" + path.string() + "'");
  return load_trace(in);
}

void save_trace(const PowerTrace& trace, std::ostream& out) {
  if (trace.window()) {
    out << kWindowTag << ' ' << format_g9(trace.window()->start) << ','
        << format_g9(trace.window()->end) << '\n';
  }
  out << kHeader << '\n';
  for (const auto& s : trace.samples()) {
    out << format_g9(s.t) << ',' << format_g9(s.power_mw) << '\n';
  }
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write error");
}

void save_trace_file(const PowerTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  save_trace(trace, out);
}

}  // namespace instrujoule
