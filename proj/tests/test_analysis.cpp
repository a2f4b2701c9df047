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

#include <gtest/gtest.h>

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "instrujoule/analysis.hpp"
#include "instrujoule/error.hpp"
#include "instrujoule/hardware.hpp"
#include "instrujoule/monitor.hpp"
#include "instrujoule/report.hpp"
#include "instrujoule/synthetic.hpp"
#include "test_support.hpp"

namespace instrujoule {
namespace {

using testing::Gen;
using Big = boost::multiprecision::cpp_bin_float_100;
using Vec = std::vector<double>;

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Io;
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

TEST(Mape, HandCases) {
  EXPECT_LE(rel(mape(Vec{110}, Vec{100}), 10.0), 1e-12);
  EXPECT_EQ(mape(Vec{1, 2, 3}, Vec{1, 2, 3}), 0.0);
  EXPECT_LE(rel(mape(Vec{3.9, 4.2}, Vec{4.0, 4.0}), 3.75), 1e-12);
}

TEST(Mape, Errors) {
  EXPECT_EQ(kind_of([] { mape(Vec{1, 2}, Vec{1, 0}); }), ErrorKind::ZeroReference);
  EXPECT_EQ(kind_of([] { mape(Vec{1, 2}, Vec{1}); }), ErrorKind::LengthMismatch);
  EXPECT_EQ(kind_of([] { mape(Vec{}, Vec{}); }), ErrorKind::LengthMismatch);
}

TEST(Mape, IsNotSymmetric) {
  const double forward = mape(Vec{110}, Vec{100});
  const double backward = mape(Vec{100}, Vec{110});
  EXPECT_LE(rel(backward, 100.0 * 10.0 / 110.0), 1e-12);
  EXPECT_NE(forward, backward);
}

TEST(Rmse, HandCases) {
  EXPECT_LE(rel(rmse(Vec{3, 4}, Vec{0, 0}), std::sqrt(12.5)), 1e-12);
  EXPECT_NEAR(rmse(Vec{3, 4}, Vec{0, 0}), 3.5355, 1e-4);
  EXPECT_EQ(rmse(Vec{5, -2}, Vec{5, -2}), 0.0);
}

TEST(Rmse, Errors) {
  EXPECT_EQ(kind_of([] { rmse(Vec{1}, Vec{1, 2}); }), ErrorKind::LengthMismatch);
  EXPECT_EQ(kind_of([] { rmse(Vec{}, Vec{}); }), ErrorKind::LengthMismatch);
}

TEST(Rmse, MatchesArbitraryPrecisionOracle) {
  Gen gen(41);
  for (int trial = 0; trial < 20; ++trial) {
    Vec pred(1000);
    Vec truth(1000);
    Big acc = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      truth[i] = gen.magnitude(-4, 3);
      pred[i] = truth[i] * gen.uniform(0.5, 1.5);
      const Big d = Big(pred[i]) - Big(truth[i]);
      acc += d * d;
    }
    const double want = static_cast<double>(sqrt(acc / 1000));
    EXPECT_LE(rel(rmse(pred, truth), want), 1e-12);
  }
}

TEST(Mape, MatchesArbitraryPrecisionOracle) {
  Gen gen(42);
  Vec pred(1000);
  Vec truth(1000);
  Big acc = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    truth[i] = (gen.coin() ? 1 : -1) * gen.magnitude(-4, 3);
    pred[i] = truth[i] * gen.uniform(0.0, 2.0);
    acc += abs(Big(pred[i]) - Big(truth[i])) / abs(Big(truth[i]));
  }
  EXPECT_LE(rel(mape(pred, truth), static_cast<double>(100 * acc / 1000)), 1e-12);
}

TEST(Stats, PermutationInvariant) {
  Gen gen(43);
  Vec pred(257);
  Vec truth(257);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    truth[i] = gen.uniform(0.01, 50);
    pred[i] = gen.uniform(0.01, 50);
  }
  const double m0 = mape(pred, truth);
  const double r0 = rmse(pred, truth);
  std::vector<std::size_t> idx(pred.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (int shuffle = 0; shuffle < 100; ++shuffle) {
    std::shuffle(idx.begin(), idx.end(), gen.engine());
    Vec p;
    Vec t;
    for (auto i : idx) {
      p.push_back(pred[i]);
      t.push_back(truth[i]);
    }
    EXPECT_LE(rel(mape(p, t), m0), 1e-12);
    EXPECT_LE(rel(rmse(p, t), r0), 1e-12);
  }
}

TEST(Rmse, SymmetricAndZeroOnlyOnEquality) {
  Gen gen(44);
  for (int trial = 0; trial < 200; ++trial) {
    Vec a(gen.integer(1, 50));
    for (auto& v : a) v = gen.uniform(-10, 10);
    Vec b = a;
    EXPECT_EQ(rmse(a, b), 0.0);
    b[gen.integer(0, b.size() - 1)] += gen.uniform(1e-6, 1.0);
    EXPECT_GT(rmse(a, b), 0.0);
    EXPECT_EQ(rmse(a, b), rmse(b, a));
  }
}

TEST(NormalizedRmse, DividesByMeanMagnitude) {
  EXPECT_LE(rel(normalized_rmse(Vec{3, 4}, Vec{2, -2}), rmse(Vec{3, 4}, Vec{2, -2}) / 2.0), 1e-15);
  EXPECT_EQ(kind_of([] { normalized_rmse(Vec{1}, Vec{0}); }), ErrorKind::ZeroReference);
}

TEST(CompareStrategies, SinglePair) {
  const std::vector<ComparisonItem> items = {{"div.u32", 6.0, 5.0, 0.0}};
  const auto c = compare_strategies(items);
  EXPECT_LE(rel(c.stats.mape, 20.0), 1e-12);
  EXPECT_EQ(c.stats.rmse, 1.0);
  EXPECT_EQ(c.stats.n, 1u);
  ASSERT_EQ(c.items.size(), 1u);
  EXPECT_LE(rel(c.items[0].relative_error_pct, 20.0), 1e-12);
  EXPECT_EQ(c.items[0].label, "div.u32");
}

TEST(CompareStrategies, SignedPerItemErrors) {
  const std::vector<ComparisonItem> items = {{"a", 90, 100, 0}, {"b", 120, 100, 0}};
  const auto c = compare_strategies(items);
  EXPECT_NEAR(c.items[0].relative_error_pct, -10.0, 1e-12);
  EXPECT_NEAR(c.items[1].relative_error_pct, 20.0, 1e-12);
  EXPECT_EQ(kind_of([] { compare_strategies({}); }), ErrorKind::LengthMismatch);
}

TEST(CompareStrategies, MtsmAgainstHardwareMatchesDirectCalls) {
  Gen gen(45);
  std::vector<ComparisonItem> items;
  Vec pred;
  Vec ref;
  for (int i = 0; i < 8; ++i) {
    SyntheticModel m;
    m.p_kernel = gen.uniform(20000, 120000);
    m.noise_stddev = 1500.0;
    m.rng_seed = static_cast<std::uint64_t>(i);
    const auto [profile, truth] = synthesize(m);
    const double hw = hw_energy(capture_from_profile(profile, 0.01), truth.window);
    SyntheticProvider p(m);
    VirtualClock clock(truth.window.start);
    const double sw = run_mtsm(p, Workload::simulated(m.kernel_duration), clock).energy_mj;
    items.push_back({"kernel" + std::to_string(i), sw, hw, 0.0});
    pred.push_back(sw);
    ref.push_back(hw);
  }
  const auto c = compare_strategies(items);
  EXPECT_EQ(c.stats.mape, mape(pred, ref));
  EXPECT_EQ(c.stats.rmse, rmse(pred, ref));
  EXPECT_EQ(c.stats.normalized_rmse, normalized_rmse(pred, ref));
  EXPECT_EQ(c.stats.n, items.size());
  EXPECT_LT(c.stats.mape, 1.0);
}

TEST(CompareStrategies, VoltaOptimizedPapiAgainstMtsmIsFrozen) {
  const auto table = load_results_fixture(std::filesystem::path(INSTRUJOULE_DATA_DIR) / "table1.csv");
  std::vector<ComparisonItem> items;
  for (const auto& row : table.rows()) {
    const auto& cell = row.cells[column_index(Generation::Volta, true)];
    ASSERT_TRUE(cell.populated()) << row.instruction;
    items.push_back({row.instruction, cell.papi->uj, cell.mtsm->uj, 0.0});
  }
  ASSERT_EQ(items.size(), 32u);
  const auto c = compare_strategies(items);
  // Computed once offline from the table with 50-digit arithmetic.
  EXPECT_LE(rel(c.stats.mape, 80.748397340759757918), 1e-12);
  EXPECT_LE(rel(c.stats.rmse, 0.051533250794996428209), 1e-12);
}

}  // namespace
}  // namespace instrujoule
