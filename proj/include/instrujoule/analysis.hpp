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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace instrujoule {

/// Mean absolute percentage error, in percent. Throws LengthMismatch for
/// unequal or empty inputs and ZeroReference when any truth value is 0.
double mape(std::span<const double> pred, std::span<const double> truth);

/// Root mean square error in the units of the inputs. Throws LengthMismatch
/// for unequal or empty inputs.
double rmse(std::span<const double> pred, std::span<const double> truth);

/// rmse divided by the mean absolute truth value. Throws ZeroReference when
/// every truth value is 0.
double normalized_rmse(std::span<const double> pred, std::span<const double> truth);

struct ComparisonStats {
  double mape = 0.0;             // percent
  double rmse = 0.0;             // input units (uJ for instruction energies)
  double normalized_rmse = 0.0;  // rmse / mean(|truth|)
  std::size_t n = 0;
};

struct ComparisonItem {
  std::string label;
  double pred = 0.0;
  double ref = 0.0;
  double relative_error_pct = 0.0;  // signed, 100 * (pred - ref) / ref
};

struct Comparison {
  ComparisonStats stats;
  std::vector<ComparisonItem> items;
};

/// Aggregate statistics plus one signed relative error per item, in input
/// order.
Comparison compare_strategies(std::span<const ComparisonItem> results);

}  // namespace instrujoule
