// Copyright 2026 The genbound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "genbound/cli.hpp"
#include "support/numerics.hpp"
#include "support/random_problem.hpp"

namespace {

using namespace genbound;

const std::string kConfigs = GENBOUND_CONFIG_DIR;
constexpr std::uint64_t kProblemSeeds = 20;

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  if (!ok) ++failures;
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << what << " (" << detail << ")" << std::endl;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<OracleSummary>& summaries() {
  static std::vector<OracleSummary> all = [] {
    std::vector<OracleSummary> out;
    for (std::uint64_t seed = 0; seed < kProblemSeeds; ++seed) out.push_back(summarize(testing::random_problem(seed)));
    return out;
  }();
  return all;
}

void criterion1() {
  double worst = 0.0;
  for (const auto& s : summaries()) worst = std::max(worst, std::abs(s.gap.gen - s.gap.emp_gen));
  report(1, worst <= 1e-12, "exact identity E[emp gen] = E[gen] on 20 random problems",
         "max |diff| = " + fmt(worst));
}

void criterion2() {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& s : summaries()) {
    for (const auto* chain : {&s.chain_randomized, &s.chain_standard}) {
      double slack = 0.0;
      chain_nondecreasing(*chain, 0.0, &slack);
      worst = std::min(worst, slack);
    }
  }
  report(2, worst >= -1e-9, "randomized and standard ordering chains on 20 random problems",
         "min slack = " + fmt(worst));
}

void criterion3() {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& s : summaries()) {
    const double target = std::abs(s.gap.gen);
    worst = std::min({worst, s.prop1 - target, s.prop3 - target});
    for (std::size_t k = 0; k < s.prop2.size(); ++k) worst = std::min({worst, s.prop2[k] - target, s.prop4[k] - target});
  }
  report(3, worst >= -1e-9, "exact mutual-information bounds >= |E[gen]| on 20 random problems",
         "min bound - |E[gen]| = " + fmt(worst));
}

void criterion4() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> mu(-5.0, 5.0), sigma(0.1, 5.0);
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const double m1 = mu(rng), m2 = mu(rng), s = sigma(rng);
    const double closed = gaussian_kl_isotropic({{m1}, s}, {{m2}, s});
    worst = std::max(worst, std::abs(closed - testing::gaussian_kl_quadrature(m1, s, m2, s)));
  }
  report(4, worst <= 1e-6, "Gaussian KL closed form vs quadrature, 50 cases", "max |diff| = " + fmt(worst));
}

void criterion5() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < 50; ++rep) {
    const double c = 8.0 * unit(rng), pi = unit(rng);
    const int u = unit(rng) < 0.5 ? 0 : 1;
    const double sigma = 0.5 + unit(rng);
    const IsotropicGaussian q0{{0.0}, sigma}, q1{{sigma * std::sqrt(2.0 * c)}, sigma};
    const auto est = gaussian_vs_mixture_kl_mc(u ? q1 : q0, q0, q1, pi, 100000, 500 + rep);
    const double bound = mixture_gaussian_kl_bound(c, pi, u);
    const double slack = est.stderr > 0.0 ? (bound - est.value) / est.stderr : (bound - est.value >= 0 ? 0.0 : -1e300);
    worst = std::min(worst, slack);
  }
  report(5, worst >= -3.0, "mixture KL bound >= Monte Carlo KL on 50 random (c, pi, u)",
         "min (bound - estimate) / stderr = " + fmt(worst));
}

void criterion6() {
  const auto c = crossover_root(0.5, 1);
  const double r = c ? std::sqrt(2.0 * *c) : std::numeric_limits<double>::quiet_NaN();
  report(6, c && r >= 2.20 && r <= 2.22, "crossover of f and g at pi = 0.5", "r = " + fmt(r) + ", c = " + fmt(c.value_or(NAN)));
}

struct SgldRun {
  BoundSuite suite;
  std::string iterations_csv;
  std::string summary_csv;
  double seconds = 0.0;
};

SgldRun run_config(const std::string& name) {
  const auto cfg = ConfigFile::load(kConfigs + "/" + name);
  auto ex = load_sgld_experiment(cfg);
  cfg.reject_unused();
  ex.settings.workers = resolve_workers(std::nullopt);
  const auto start = std::chrono::steady_clock::now();
  SgldRun run;
  run.suite = run_bound_suite(ex.problem, ex.sgld, ex.settings);
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream a, b;
  write_iteration_csv(a, run.suite, ex.settings);
  write_summary_csv(b, run.suite);
  run.iterations_csv = a.str();
  run.summary_csv = b.str();
  return run;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Second run through the command-line entry point, single-threaded.
bool rerun_matches(const std::string& name, const SgldRun& first) {
  const auto dir = std::filesystem::temp_directory_path() / "genbound_acceptance";
  std::filesystem::create_directories(dir);
  const auto out = (dir / (name + ".csv")).string();
  const std::string config = kConfigs + "/" + name;
  const char* argv[] = {"genbound", "sgld", "--config", config.c_str(), "--out", out.c_str(), "--workers", "1"};
  std::ostringstream sink_out, sink_err;
  if (run_cli(8, argv, sink_out, sink_err) != kExitOk) return false;
  return slurp(out) == first.iterations_csv && slurp(summary_path(out)) == first.summary_csv;
}

bool covers_gap(const BoundReport& r) {
  return r.value >= r.gen_gap - 3.0 * std::hypot(r.stderr, r.gen_gap_stderr);
}

void criteria7to10() {
  const auto ref = run_config("sgld_reference.conf");
  const auto& s = ref.suite;
  bool valid = true;
  std::string detail = "gap = " + fmt(s.gen_gap.value) + " +- " + fmt(s.gen_gap.stderr);
  for (const auto& r : s.reports) {
    valid = valid && covers_gap(r);
    detail += ", " + r.name + " = " + fmt(r.value) + " +- " + fmt(r.stderr);
  }
  const double min_b = s.report(kBoundMin).value;
  const bool ordered = min_b <= s.report(kBoundF).value && min_b <= s.report(kBoundG).value;
  const bool no_divergence = !divergence_exceeded(s);
  detail += ", " + fmt(ref.seconds) + " s";
  report(7, valid && ordered && no_divergence && s.n_outer_used >= 2,
         "SGLD reference problem: bounds cover the gap, min <= f and min <= g", detail);

  const auto cmp = run_config("sgld_comparison.conf");
  double sq = 0.0;
  std::size_t counted = 0;
  for (const auto& row : cmp.suite.rows)
    if (!std::isnan(row.mean_sq_pi_error)) {
      sq += row.mean_sq_pi_error;
      ++counted;
    }
  const double avg_sq = counted ? sq / static_cast<double>(counted) : NAN;
  const double lip = cmp.suite.report(kBoundLipschitz).value, neg = cmp.suite.report(kBoundNegrea31).value;
  report(8, avg_sq <= 0.125 && lip <= neg, "Lipschitz-form bound <= comparison bound when E(U - pi)^2 <= 1/8",
         "avg squared pi error = " + fmt(avg_sq) + ", lipschitz = " + fmt(lip) + ", negrea31 = " + fmt(neg) + ", " +
             fmt(cmp.seconds) + " s");

  bool dominated = s.report(kBoundF).value <= s.report(kBoundLipschitz).value;
  for (const auto& row : s.rows) dominated = dominated && row.bound_f <= row.bound_lipschitz;
  report(9, dominated, "f-bound <= Lipschitz bound on shared seeds",
         "f = " + fmt(s.report(kBoundF).value) + ", lipschitz = " + fmt(s.report(kBoundLipschitz).value));

  const bool same = rerun_matches("sgld_reference.conf", ref) && rerun_matches("sgld_comparison.conf", cmp);
  report(10, same, "byte-identical CSVs on rerun with the same master seed", same ? "identical" : "differs");
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criteria7to10();
  return failures == 0 ? 0 : 1;
}
