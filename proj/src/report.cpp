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

#include "instrujoule/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "instrujoule/error.hpp"

#ifndef INSTRUJOULE_DEFAULT_FIXTURES
#define INSTRUJOULE_DEFAULT_FIXTURES "data"
#endif

namespace instrujoule {

std::size_t column_index(Generation generation, bool optimized) noexcept {
  return (optimized ? 0 : 4) + static_cast<std::size_t>(generation);
}

TableRow& ResultsTable::row(Category category, std::string_view instruction) {
  for (auto& r : rows_) {
    if (r.category == category && r.instruction == instruction) return r;
  }
  TableRow r;
  r.category = category;
  r.instruction = std::string(instruction);
  rows_.push_back(std::move(r));
  return rows_.back();
}

const TableRow* ResultsTable::find(Category category, std::string_view instruction) const {
  for (const auto& r : rows_) {
    if (r.category == category && r.instruction == instruction) return &r;
  }
  return nullptr;
}

const TableCell* ResultsTable::cell(Category category, std::string_view instruction,
                                    Generation generation, bool optimized) const {
  const auto* r = find(category, instruction);
  return r == nullptr ? nullptr : &r->cells[column_index(generation, optimized)];
}

const TableCell* ResultsTable::cell(const InstructionSpec& spec, Generation generation,
                                    bool optimized) const {
  return cell(spec.category, spec.table_row, generation, optimized);
}

void ResultsTable::set(const InstructionSpec& spec, Generation generation, bool optimized,
                       Strategy strategy, double uj) {
  if (strategy == Strategy::SMA) {
    throw Error(ErrorKind::InvalidArgument, "the table holds PAPI and MTSM values only");
  }
  auto& c = row(spec.category, spec.table_row).cells[column_index(generation, optimized)];
  (strategy == Strategy::PapiStyle ? c.papi : c.mtsm) = TableValue{uj, {}};
}

namespace {

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string value_text(const std::optional<TableValue>& v, TableFormat format) {
  if (!v) return "NA";
  if (format == TableFormat::Csv && !v->text.empty()) return v->text;
  return fixed4(v->uj);
}

std::string cell_text(const TableCell& c, TableFormat format) {
  if (!c.papi && !c.mtsm) return "NA";
  return value_text(c.papi, format) + " , " + value_text(c.mtsm, format);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string column_title(std::size_t i) {
  return std::string(i < 4 ? "Optimized " : "Non-Optimized ") +
         std::string(to_string(kAllGenerations[i % 4]));
}

// Always leaves at least one space so overlong text never fuses columns.
std::string pad(std::string s, std::size_t width) {
  s.append(s.size() < width ? width - s.size() : 1, ' ');
  return s;
}

constexpr std::size_t kLabelWidth = 24;
constexpr std::size_t kCellWidth = 23;

}  // namespace

std::string render_table(const ResultsTable& table, TableFormat format) {
  std::string out;
  if (format == TableFormat::Csv) {
    out += "category,instruction";
    for (std::size_t i = 0; i < kTableColumns; ++i) out += "," + column_title(i);
    out += '\n';
  } else {
    out += "Energy per instruction (uJ), each cell \"PAPI , MTSM\"\n";
    out += pad("instruction", kLabelWidth);
    for (std::size_t i = 0; i < kTableColumns; ++i) out += pad(column_title(i), kCellWidth);
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  }
  for (Category category : kAllCategories) {
    bool banner = false;
    for (const auto& r : table.rows()) {
      if (r.category != category) continue;
      if (format == TableFormat::Csv) {
        out += csv_field(std::string(to_string(category))) + ',' + csv_field(r.instruction);
        for (const auto& c : r.cells) {
          const auto text = cell_text(c, format);
          out += ',' + (text == "NA" ? text : "\"" + text + "\"");
        }
      } else {
        if (!banner) {
          out += "-- " + std::to_string(category_number(category)) + ". " +
                 std::string(to_string(category)) + " --\n";
          banner = true;
        }
        out += pad(r.instruction, kLabelWidth);
        for (const auto& c : r.cells) out += pad(cell_text(c, format), kCellWidth);
        while (out.back() == ' ') out.pop_back();
      }
      out += '\n';
    }
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::filesystem::path fixture_dir() {
  if (const char* env = std::getenv("INSTRUJOULE_FIXTURES"); env != nullptr && *env != '\0') {
    return env;
  }
  return INSTRUJOULE_DEFAULT_FIXTURES;
}

namespace {

constexpr std::string_view kFixtureHeader = "category,instruction,generation,level,papi_uj,mtsm_uj";
constexpr std::string_view kChecksumTag = "# fnv1a64: ";

[[noreturn]] void corrupt(const std::string& msg, std::size_t line = 0) {
  throw Error(ErrorKind::FixtureCorrupt, msg, line);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::optional<TableValue> parse_value(std::string_view text, std::size_t line) {
  if (text == "NA") return std::nullopt;
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v) ||
      v < 0.0) {
    corrupt("bad energy value '" + std::string(text) + "'", line);
  }
  return TableValue{v, std::string(text)};
}

}  // namespace

ResultsTable load_results_fixture(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open fixture '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();

  const auto first_nl = content.find('\n');
  const auto second_nl = first_nl == std::string::npos ? first_nl : content.find('\n', first_nl + 1);
  if (second_nl == std::string::npos || content.front() != '#') corrupt("missing fixture preamble", 1);
  const std::string_view checksum_line(content.data() + first_nl + 1, second_nl - first_nl - 1);
  if (!checksum_line.starts_with(kChecksumTag)) corrupt("missing checksum line", 2);
  const auto hex = checksum_line.substr(kChecksumTag.size());
  std::uint64_t expected = 0;
  auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), expected, 16);
  if (hex.empty() || ec != std::errc() || ptr != hex.data() + hex.size()) {
    corrupt("unreadable checksum", 2);
  }
  const std::string_view payload(content.data() + second_nl + 1, content.size() - second_nl - 1);
  if (fnv1a64(payload) != expected) corrupt("checksum mismatch in '" + path.string() + "'");

  ResultsTable table;
  std::vector<std::array<bool, kTableColumns>> seen;
  std::size_t line_no = 2;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos < payload.size()) {
    auto nl = payload.find('\n', pos);
    if (nl == std::string_view::npos) nl = payload.size();
    const auto line = payload.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kFixtureHeader) corrupt("unexpected header", line_no);
      header_seen = true;
      continue;
    }
    const auto f = split(line);
    if (f.size() != 6) corrupt("expected 6 fields", line_no);
    int number = 0;
    auto [p, e] = std::from_chars(f[0].data(), f[0].data() + f[0].size(), number);
    if (e != std::errc() || p != f[0].data() + f[0].size() || number < 1 ||
        number > static_cast<int>(kAllCategories.size())) {
      corrupt("bad category number '" + std::string(f[0]) + "'", line_no);
    }
    const Category category = kAllCategories[static_cast<std::size_t>(number - 1)];
    const auto generation = parse_generation(f[2]);
    if (!generation) corrupt("unknown generation '" + std::string(f[2]) + "'", line_no);
    if (f[3] != "optimized" && f[3] != "non-optimized") {
      corrupt("level must be optimized or non-optimized", line_no);
    }
    const bool optimized = f[3] == "optimized";
    TableCell cell{parse_value(f[4], line_no), parse_value(f[5], line_no)};
    if (cell.papi.has_value() != cell.mtsm.has_value()) {
      corrupt("a cell needs both values or NA for both", line_no);
    }
    const auto before = table.rows().size();
    auto& row = table.row(category, f[1]);
    if (table.rows().size() != before) seen.emplace_back();
    const auto row_index = static_cast<std::size_t>(&row - table.rows().data());
    const auto col = column_index(*generation, optimized);
    if (seen[row_index][col]) corrupt("duplicate cell", line_no);
    seen[row_index][col] = true;
    row.cells[col] = std::move(cell);
  }
  if (!header_seen) corrupt("missing header", line_no);
  for (std::size_t i = 0; i < seen.size(); ++i) {
    for (bool s : seen[i]) {
      if (!s) corrupt("row '" + table.rows()[i].instruction + "' is missing cells");
    }
  }
  return table;
}

ResultsTable load_paper_fixture() { return load_results_fixture(fixture_dir() / "table1.csv"); }

namespace {

std::string plot_rows(const PowerTrace& trace, std::optional<KernelWindow> markers) {
  std::string out = "record,t_s,power_mw\n";
  for (const auto& s : trace.samples()) {
    out += "sample," + format_g9(s.t) + ',' + format_g9(s.power_mw) + '\n';
  }
  if (markers) {
    out += "window_start," + format_g9(markers->start) + ",\n";
    out += "window_end," + format_g9(markers->end) + ",\n";
  }
  return out;
}

}  // namespace

std::string emit_plot_data(const PowerTrace& trace) { return plot_rows(trace, trace.window()); }

std::string emit_plot_data(const EnergyResult& result) {
  return plot_rows(result.trace, KernelWindow{result.flag_timeline.set, result.flag_timeline.clear});
}

}  // namespace instrujoule
