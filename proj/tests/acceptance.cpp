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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <bit>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fixture_exceptions.hpp"
#include "instrujoule/analysis.hpp"
#include "instrujoule/cli.hpp"
#include "instrujoule/codegen.hpp"
#include "instrujoule/energy.hpp"
#include "instrujoule/error.hpp"
#include "instrujoule/hardware.hpp"
#include "instrujoule/json_io.hpp"
#include "instrujoule/monitor.hpp"
#include "instrujoule/report.hpp"
#include "instrujoule/synthetic.hpp"
#include "test_support.hpp"

namespace {

using namespace instrujoule;
using testing::Gen;
using Big = boost::multiprecision::cpp_bin_float_100;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;  // keep the first failure
    pass = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v) { return format_g9(v); }

std::int64_t ulps_apart(double a, double b) {
  auto key = [](double x) {
    const auto bits = std::bit_cast<std::int64_t>(x);
    return bits < 0 ? std::numeric_limits<std::int64_t>::min() - bits : bits;
  };
  const auto d = key(a) - key(b);
  return d < 0 ? -d : d;
}

Outcome mtsm_matches_truth() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  Gen gen(1001);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    SyntheticModel m;
    m.p_idle = gen.uniform(5000, 60000);
    m.p_kernel = gen.uniform(10000, 200000);
    m.kernel_duration = gen.uniform(0.2, 3.0);
    m.kernel_ramp = gen.coin() ? gen.uniform(0, 50000) : 0.0;
    m.pre_rise_lead = gen.uniform(0.001, 0.02);
    m.rng_seed = 5000 + i;
    m.noise_stddev = 0.0;
    m.sample_rate = gen.uniform(2000, 10000);
    const auto truth = synthetic_truth(m);
    SyntheticProvider provider(m);
    VirtualClock clock(truth.window.start);
    SimOptions sim;
    sim.read_cost = 1.0 / m.sample_rate;
    const auto r = run_mtsm(provider, Workload::simulated(m.kernel_duration), clock, sim);
    const double rel = std::abs(r.energy_mj - truth.true_energy_mj) / truth.true_energy_mj;
    worst = std::max(worst, rel);
    if (rel > 0.005) o.fail("model " + std::to_string(i) + " off by " + num(rel * 100) + "%");
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= 5.0) o.fail("took " + num(elapsed) + " s");
  if (o.pass) o.detail = "50 models, worst " + num(worst * 100) + "%, " + num(elapsed) + " s";
  return o;
}

Outcome instruction_energy_exact() {
  Outcome o;
  Gen gen(2002);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double total = gen.magnitude(-3, 9);
    const double overhead = gen.coin() ? gen.magnitude(-3, 9) : total * gen.uniform(0.5, 1.0);
    const auto n = static_cast<std::uint64_t>(gen.integer(1, 1'000'000'000'000LL));
    const auto got = instruction_energy(total, overhead, n);
    const Big exact = (Big(total) - Big(overhead)) / Big(n) * 1000;
    if (exact == 0) {
      if (got.microjoules != 0.0) o.fail("expected 0 at trial " + std::to_string(i));
      continue;
    }
    const double rel = static_cast<double>(abs((Big(got.microjoules) - exact) / exact));
    worst = std::max(worst, rel);
    if (rel > 1e-12) o.fail("trial " + std::to_string(i) + " relative error " + num(rel));
    if (got.negative_net != (exact < 0)) o.fail("negative flag wrong at trial " + std::to_string(i));
  }
  if (o.pass) o.detail = "1000 triples, worst relative error " + num(worst);
  return o;
}

Outcome hw_power_oracle() {
  Outcome o;
  Gen gen(3003);
  auto exact_total = [](const HwChannelSample& s, double r_s) {
    const Big rs(r_s);
    const Big p12 = (Big(s.v_s1) - Big(s.v_g1)) / rs * Big(s.v_g1);
    const Big p33 = (Big(s.v_s2) - Big(s.v_g2)) / rs * Big(s.v_g2);
    return p12 + p33 + Big(s.i_clamp) * Big(s.v_dps);
  };
  std::int64_t worst = 0;
  for (int i = 0; i < 1000; ++i) {
    HwChannelSample s;
    s.v_g1 = gen.uniform(11.4, 12.6);
    s.v_s1 = s.v_g1 + gen.uniform(0.0, 0.5);
    s.v_g2 = gen.uniform(3.1, 3.5);
    s.v_s2 = s.v_g2 + gen.uniform(0.0, 0.2);
    s.i_clamp = gen.uniform(0.0, 25.0);
    s.v_dps = gen.uniform(11.4, 12.6);
    const double r_s = gen.uniform(0.005, 0.2);
    const double got = hw_power(s, r_s).p_total;
    const auto want = static_cast<double>(exact_total(s, r_s));
    const auto d = ulps_apart(got, want);
    worst = std::max(worst, d);
    if (d > 1) o.fail("sample " + std::to_string(i) + " is " + std::to_string(d) + " ulp away");
  }
  // The worked example: the exact value of these doubles rounds to the
  // double nearest 135.3 minus 2 ulp, which prints as 135.3.
  const HwChannelSample example{0.0, 12.1, 12.0, 3.4, 3.3, 10.0, 12.0};
  const double p = hw_power(example, 0.1).p_total;
  const auto want = static_cast<double>(exact_total(example, 0.1));
  if (ulps_apart(p, want) > 1) o.fail("worked example " + num(p) + " vs exact " + num(want));
  if (format_g9(p) != "135.3") o.fail("worked example prints as " + format_g9(p));
  if (std::abs(p - 135.3) > 1e-12) o.fail("worked example " + num(p) + " W");
  if (o.pass) o.detail = "1000 samples, worst " + std::to_string(worst) + " ulp; example " + format_g9(p) + " W";
  return o;
}

Outcome mtsm_ordering() {
  Outcome o;
  Gen gen(4004);
  std::size_t samples = 0;
  for (int i = 0; i < 100; ++i) {
    SyntheticModel m;
    m.kernel_duration = gen.uniform(0.05, 1.0);
    m.noise_stddev = gen.uniform(0, 2000);
    m.rng_seed = 9000 + i;
    const auto l = layout(m);
    SimOptions sim;
    sim.read_cost = gen.uniform(0.0001, 0.005);
    sim.launch_latency = gen.coin() ? gen.uniform(0, 0.01) : 0.0;
    sim.sync_latency = gen.coin() ? gen.uniform(0, 0.01) : 0.0;
    SyntheticProvider provider(m);
    VirtualClock clock(gen.uniform(0, l.rise));
    const auto r = run_mtsm(provider, Workload::simulated(m.kernel_duration), clock, sim);
    const auto& f = r.flag_timeline;
    const auto& w = r.workload_window;
    if (!(f.set <= w.start && w.start < w.end && w.end <= f.clear)) {
      o.fail("run " + std::to_string(i) + " window outside the flag");
    }
    for (const auto& s : r.trace.samples()) {
      if (s.t < f.set || s.t > f.clear) o.fail("run " + std::to_string(i) + " sample at " + num(s.t));
    }
    samples += r.trace.size();
  }
  if (o.pass) o.detail = "100 runs, " + std::to_string(samples) + " samples inside the flag";
  return o;
}

Outcome papi_at_least_mtsm() {
  Outcome o;
  Gen gen(5005);
  int held = 0;
  for (int i = 0; i < 100; ++i) {
    // Non-decreasing power across the kernel keeps the end reading at or
    // above the window mean.
    SyntheticModel m;
    m.p_idle = gen.uniform(5000, 60000);
    m.p_kernel = gen.uniform(10000, 200000);
    m.kernel_duration = gen.uniform(0.2, 3.0);
    m.kernel_ramp = i % 10 == 0 ? 0.0 : gen.uniform(0, 80000);
    m.rng_seed = 7000 + i;
    const auto truth = synthetic_truth(m);
    SyntheticProvider a(m);
    SyntheticProvider b(m);
    VirtualClock ca(truth.window.start);
    VirtualClock cb(truth.window.start);
    const auto papi = run_papi_style(a, Workload::simulated(m.kernel_duration), ca);
    const auto mtsm = run_mtsm(b, Workload::simulated(m.kernel_duration), cb);
    if (papi.energy_mj >= mtsm.energy_mj) {
      ++held;
    } else {
      o.fail("run " + std::to_string(i) + ": PAPI " + num(papi.energy_mj) + " < MTSM " + num(mtsm.energy_mj));
    }
  }
  o.detail = o.pass ? std::to_string(held) + "/100 runs" : o.detail + " (" + std::to_string(held) + "/100)";
  return o;
}

Outcome generator_round_trip() {
  Outcome o;
  std::size_t n = 0;
  std::vector<bool> seen(kAllCategories.size(), false);
  for (const auto& spec : list_catalog()) {
    const auto total = generate_kernel(spec, KernelVariant::Total);
    const auto overhead = generate_kernel(spec, KernelVariant::Overhead);
    const auto report = validate_kernel(total);
    if (!report.all_pass()) o.fail(spec.mnemonic() + " fails validation");
    const auto diff = testing::line_diff_count(total.ptx_text, overhead.ptx_text);
    if (diff != total.unroll_factor) {
      o.fail(spec.mnemonic() + " diff is " + std::to_string(diff) + " lines");
    }
    seen[static_cast<std::size_t>(category_number(spec.category) - 1)] = true;
    ++n;
  }
  if (std::count(seen.begin(), seen.end(), true) != static_cast<long>(seen.size())) {
    o.fail("catalog misses a category");
  }
  if (o.pass) o.detail = std::to_string(n) + " instructions across 8 categories";
  return o;
}

Outcome fixture_regression() {
  Outcome o;
  const auto table = load_paper_fixture();
  const auto golden =
      testing::slurp(std::filesystem::path(INSTRUJOULE_GOLDEN_DIR) / "table1_render.csv");
  if (render_table(table, TableFormat::Csv) != golden) o.fail("CSV render differs from golden");
  std::size_t cells = 0;
  std::size_t listed = 0;
  for (const auto& r : table.rows()) {
    for (auto g : kAllGenerations) {
      const auto& opt = r.cells[column_index(g, true)];
      const auto& non = r.cells[column_index(g, false)];
      if (opt.populated() && non.populated() && non.mtsm->uj < opt.mtsm->uj) {
        o.fail(r.instruction + " " + std::string(to_string(g)) + ": non-optimized MTSM below optimized");
      }
      for (bool optimized : {true, false}) {
        const auto& c = optimized ? opt : non;
        if (!c.populated()) continue;
        ++cells;
        const bool listed_cell = testing::excepted(r, g, optimized);
        if (listed_cell) {
          ++listed;
          if (!(c.papi->uj < c.mtsm->uj)) o.fail(r.instruction + " is listed but PAPI >= MTSM");
        } else if (c.papi->uj < c.mtsm->uj) {
          o.fail(r.instruction + " " + std::string(to_string(g)) + ": PAPI below MTSM");
        }
      }
    }
  }
  if (listed != testing::kPapiBelowMtsm.size()) o.fail("listed exceptions not all present");
  if (o.pass) {
    o.detail = "golden match, " + std::to_string(cells) + " cells, " + std::to_string(listed) +
               " listed PAPI<MTSM cells";
  }
  return o;
}

Outcome mape_rmse() {
  Outcome o;
  auto close = [](double got, double want) { return std::abs(got - want) <= 1e-12 * std::abs(want); };
  {
    const std::vector<double> p{110}, t{100};
    if (!close(mape(p, t), 10.0)) o.fail("mape [110]/[100] = " + num(mape(p, t)));
  }
  {
    const std::vector<double> p{3.9, 4.2}, t{4.0, 4.0};
    if (!close(mape(p, t), 3.75)) o.fail("mape 3.75 case = " + num(mape(p, t)));
  }
  {
    const std::vector<double> p{3, 4}, t{0, 0};
    if (!close(rmse(p, t), std::sqrt(12.5))) o.fail("rmse [3,4]/[0,0] = " + num(rmse(p, t)));
  }
  {
    const std::vector<double> same{1.5, 2.5, 3.5};
    if (mape(same, same) != 0.0 || rmse(same, same) != 0.0) o.fail("identity is not zero");
  }
  Gen gen(8008);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<std::size_t>(gen.integer(2, 60));
    std::vector<double> p(n), t(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = gen.magnitude(-2, 2) * (gen.coin() ? 1 : -1);
      p[i] = t[i] * gen.uniform(0.5, 1.5);
    }
    const double m0 = mape(p, t);
    const double r0 = rmse(p, t);
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), gen.engine());
    std::vector<double> ps(n), ts(n);
    for (std::size_t i = 0; i < n; ++i) {
      ps[i] = p[idx[i]];
      ts[i] = t[idx[i]];
    }
    if (!close(mape(ps, ts), m0) || !close(rmse(ps, ts), r0)) {
      o.fail("shuffle " + std::to_string(trial) + " changed the result");
    }
  }
  if (o.pass) o.detail = "hand cases exact, 100 shuffles invariant";
  return o;
}

Outcome end_to_end() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  testing::TempDir dir;
  auto run = [&](std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli_main(args, out, err);
    if (code != 0) {
      std::string joined;
      for (const auto& a : args) joined += a + " ";
      throw std::runtime_error(joined + "-> exit " + std::to_string(code) + ": " + err.str());
    }
    return out.str();
  };

  const auto ptx = (dir / "div_total.ptx").string();
  run({"gen", "--inst", "div.u32", "--variant", "total", "--out", ptx});
  run({"gen", "--inst", "div.u32", "--variant", "overhead", "--out", (dir / "div_overhead.ptx").string()});
  const auto meta = nlohmann::json::parse(run({"gen", "--inst", "div.u32", "--meta"}));
  const auto n = meta["n_instructions"].get<std::uint64_t>();

  // Inject 1 uJ per instruction: the total kernel draws exactly enough
  // extra power over its duration to account for n of them.
  SyntheticModel overhead;
  SyntheticModel total = overhead;
  total.p_kernel += 1.0 /* uJ */ * 1e-3 * static_cast<double>(n) / overhead.kernel_duration;
  testing::spit(dir / "overhead.json", to_json(overhead));
  testing::spit(dir / "total.json", to_json(total));

  const auto t_json = (dir / "t.json").string();
  const auto o_json = (dir / "o.json").string();
  run({"measure", "--strategy", "mtsm", "--provider", "synth:" + (dir / "total.json").string(), "--out", t_json});
  run({"measure", "--strategy", "mtsm", "--provider", "synth:" + (dir / "overhead.json").string(), "--out", o_json});
  const auto e = instruction_energy_from_json(
      run({"report", "--total", t_json, "--overhead", o_json, "--instructions", std::to_string(n),
           "--inst", "div.u32"}));
  const double rel = std::abs(e.energy_per_instruction_uj - 1.0);
  if (rel > 0.01) o.fail("recovered " + num(e.energy_per_instruction_uj) + " uJ");
  const double elapsed = seconds_since(t0);
  if (elapsed >= 10.0) o.fail("took " + num(elapsed) + " s");
  if (o.pass) {
    o.detail = "recovered " + num(e.energy_per_instruction_uj) + " uJ over " + std::to_string(n) +
               " instructions in " + num(elapsed) + " s";
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"MTSM energy matches synthetic truth within 0.5%", mtsm_matches_truth},
      {"per-instruction energy matches a 100-digit oracle to 1e-12", instruction_energy_exact},
      {"board power matches a scalar oracle to 1 ulp; 135.3 W example", hw_power_oracle},
      {"MTSM samples and workload lie inside the flag", mtsm_ordering},
      {"PAPI >= MTSM on non-decreasing kernels", papi_at_least_mtsm},
      {"every catalog kernel validates; total/overhead differ by unroll lines", generator_round_trip},
      {"fixture renders to golden CSV; fixture data checks hold", fixture_regression},
      {"MAPE/RMSE hand cases and permutation invariance", mape_rmse},
      {"gen -> measure x2 -> report recovers 1 uJ within 1%", end_to_end},
  };
  int failures = 0;
  int id = 0;
  for (const auto& [name, check] : criteria) {
    ++id;
    Outcome o;
    try {
      o = check();
    } catch (const Error& e) {
      o.pass = false;
      o.detail = "threw " + e.describe();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s %d: %s (%s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
