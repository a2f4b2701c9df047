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

#include "instrujoule/analysis.hpp"

#include <cmath>

#include "instrujoule/energy.hpp"
#include "instrujoule/error.hpp"

namespace instrujoule {

namespace {

void check_lengths(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size()) {
    throw Error(ErrorKind::LengthMismatch, "pred has " + std::to_string(pred.size()) +
                                               " values, truth has " + std::to_string(truth.size()));
  }
  if (pred.empty()) throw Error(ErrorKind::LengthMismatch, "no pairs to compare");
}

}  // namespace

double mape(std::span<const double> pred, std::span<const double> truth) {
  check_lengths(pred, truth);
  CompensatedSum sum;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (truth[i] == 0.0) {
      throw Error(ErrorKind::ZeroReference, "truth value " + std::to_string(i) + " is zero");
    }
    sum.add(std::fabs(pred[i] - truth[i]) / std::fabs(truth[i]));
  }
  return 100.0 * sum.value() / static_cast<double>(pred.size());
}

double rmse(std::span<const double> pred, std::span<const double> truth) {
  check_lengths(pred, truth);
  CompensatedSum sum;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - truth[i];
    sum.add(d * d);
  }
  return std::sqrt(sum.value() / static_cast<double>(pred.size()));
}

double normalized_rmse(std::span<const double> pred, std::span<const double> truth) {
  const double r = rmse(pred, truth);
  CompensatedSum sum;
  for (double t : truth) sum.add(std::fabs(t));
  if (sum.value() == 0.0) throw Error(ErrorKind::ZeroReference, "all truth values are zero");
  return r / (sum.value() / static_cast<double>(truth.size()));
}

Comparison compare_strategies(std::span<const ComparisonItem> results) {
  std::vector<double> pred;
  std::vector<double> ref;
  pred.reserve(results.size());
  ref.reserve(results.size());
  for (const auto& item : results) {
    pred.push_back(item.pred);
    ref.push_back(item.ref);
  }
  Comparison out;
  out.stats.mape = mape(pred, ref);
  out.stats.rmse = rmse(pred, ref);
  out.stats.normalized_rmse = normalized_rmse(pred, ref);
  out.stats.n = results.size();
  out.items.assign(results.begin(), results.end());
  for (auto& item : out.items) item.relative_error_pct = 100.0 * (item.pred - item.ref) / item.ref;
  return out;
}

}  // namespace instrujoule
