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

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "instrujoule/catalog.hpp"
#include "instrujoule/monitor.hpp"
#include "instrujoule/power_trace.hpp"

namespace instrujoule {

/// One energy figure in microjoules. `text` keeps the digits exactly as
/// they were loaded so a fixture renders back byte for byte; it is empty for
/// values produced by a measurement.
struct TableValue {
  double uj = 0.0;
  std::string text;

  friend bool operator==(const TableValue&, const TableValue&) = default;
};

/// PAPI-style and MTSM readings for one instruction row on one
/// generation and optimization level.
struct TableCell {
  std::optional<TableValue> papi;
  std::optional<TableValue> mtsm;

  bool populated() const noexcept { return papi.has_value() && mtsm.has_value(); }

  friend bool operator==(const TableCell&, const TableCell&) = default;
};

/// Column position of (generation, level): optimized Maxwell..Turing, then
/// non-optimized Maxwell..Turing.
std::size_t column_index(Generation generation, bool optimized) noexcept;
inline constexpr std::size_t kTableColumns = 8;

struct TableRow {
  Category category = Category::IntegerArithmetic;
  std::string instruction;  // row label, e.g. "add / sub / min / max"
  std::array<TableCell, kTableColumns> cells;
};

/// Energy-per-instruction table, one row per instruction group.
class ResultsTable {
 public:
  const std::vector<TableRow>& rows() const noexcept { return rows_; }
  bool empty() const noexcept { return rows_.empty(); }

  /// Row for (category, label); created at the end of the table if absent.
  TableRow& row(Category category, std::string_view instruction);

  const TableRow* find(Category category, std::string_view instruction) const;

  /// Cell lookup; nullptr when the row does not exist.
  const TableCell* cell(Category category, std::string_view instruction, Generation generation,
                        bool optimized) const;
  const TableCell* cell(const InstructionSpec& spec, Generation generation, bool optimized) const;

  /// Stores one measured value in the row the instruction belongs to.
  void set(const InstructionSpec& spec, Generation generation, bool optimized, Strategy strategy,
           double uj);

 private:
  std::vector<TableRow> rows_;
};

enum class TableFormat { Text, Csv };

/// Rows grouped under category banners in table order, each cell shown as
/// "PAPI , MTSM". Text uses 4 decimals; CSV keeps loaded digits verbatim
/// (4 decimals for measured values). Unpopulated cells read NA.
std::string render_table(const ResultsTable& table, TableFormat format);

/// FNV-1a 64-bit hash, as used by the fixture checksum line.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Directory holding the bundled data files: $INSTRUJOULE_FIXTURES when set,
/// else the build-time data directory.
std::filesystem::path fixture_dir();

/// Reads a results-table fixture: two comment lines (description, then
/// `# fnv1a64: <hex>` over the remaining bytes), the header
/// `category,instruction,generation,level,papi_uj,mtsm_uj`, and one row per
/// cell. Throws FixtureCorrupt on checksum or format problems, Io when the
/// file cannot be read.
ResultsTable load_results_fixture(const std::filesystem::path& path);

/// The bundled energy-per-instruction table (table1.csv in fixture_dir()).
ResultsTable load_paper_fixture();

/// Plot-ready CSV with header `record,t_s,power_mw`: one `sample` row per
/// reading, then `window_start` / `window_end` rows when a window is known.
std::string emit_plot_data(const PowerTrace& trace);

/// Same, with the markers placed at the result's flag timeline.
std::string emit_plot_data(const EnergyResult& result);

}  // namespace instrujoule
