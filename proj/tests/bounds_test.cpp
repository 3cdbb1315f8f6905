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

#include <gtest/gtest.h>

#include <cmath>

#include "genbound/bounds.hpp"

namespace genbound {
namespace {

SgldProblem small_problem() { return classification_problem(8, {1.0, 0.0}, 1.0, 4.0, 5000, 17); }

SgldConfig small_config(double eta0 = 2.0, double sigma0 = 0.2) {
  SgldConfig cfg;
  cfg.t_max = 40;
  cfg.batch_size = 2;
  cfg.dim = 2;
  cfg.eta = step_decay_schedule(eta0, 20);
  cfg.sigma = constant_schedule(sigma0);
  return cfg;
}

EstimatorSettings small_settings(std::size_t workers = 1) {
  EstimatorSettings s;
  s.n_outer = 16;
  s.n_inner = 4;
  s.seed = 5;
  s.workers = workers;
  s.gap_every = 10;
  return s;
}

TEST(BoundSuite, ExactOrderingOnSharedSeeds) {
  const auto suite = run_bound_suite(small_problem(), small_config(), small_settings());
  const auto& f = suite.report(kBoundF);
  EXPECT_LE(suite.report(kBoundMin).value, f.value);
  EXPECT_LE(suite.report(kBoundMin).value, suite.report(kBoundG).value);
  EXPECT_LE(f.value, suite.report(kBoundLipschitz).value);
  for (const auto& row : suite.rows) {
    EXPECT_LE(row.bound_min, row.bound_f);
    EXPECT_LE(row.bound_min, row.bound_g);
    EXPECT_LE(row.bound_f, row.bound_lipschitz);
    EXPECT_LE(row.mean_min, std::min(row.mean_f, row.mean_g));
  }
  // cumulative bounds never shrink with the horizon
  for (std::size_t t = 1; t < suite.rows.size(); ++t) EXPECT_GE(suite.rows[t].bound_negrea31, suite.rows[t - 1].bound_negrea31);
}

TEST(BoundSuite, ResultIndependentOfWorkerCount) {
  const auto a = run_bound_suite(small_problem(), small_config(), small_settings(1));
  const auto b = run_bound_suite(small_problem(), small_config(), small_settings(4));
  for (std::size_t k = 0; k < kBoundKinds; ++k) {
    EXPECT_EQ(a.reports[k].value, b.reports[k].value);
    EXPECT_EQ(a.reports[k].stderr, b.reports[k].stderr);
  }
  EXPECT_EQ(a.gen_gap.value, b.gen_gap.value);
}

TEST(BoundSuite, RowsCoverEveryIterationWithGapCheckpoints) {
  const auto suite = run_bound_suite(small_problem(), small_config(), small_settings());
  ASSERT_EQ(suite.rows.size(), 40u);
  for (const auto& row : suite.rows) {
    const bool checkpoint = row.t % 10 == 0;
    EXPECT_EQ(std::isnan(row.gen_gap), !checkpoint) << row.t;
  }
  EXPECT_EQ(suite.rows.back().gen_gap, suite.gen_gap.value);
  EXPECT_DOUBLE_EQ(suite.rows[20].eta, 1.0);
}

TEST(BoundSuite, ZeroStepMeansZeroBounds) {
  const auto suite = run_bound_suite(small_problem(), small_config(0.0), small_settings());
  for (const auto& r : suite.reports) EXPECT_EQ(r.value, 0.0) << r.name;
  EXPECT_LT(std::abs(suite.gen_gap.value), 3.0 * suite.gen_gap.stderr + 1e-3);
}

TEST(BoundSuite, OracleBitsCollapseBounds) {
  auto s = small_settings();
  s.pi_source = PiSource::kOracleBits;
  const auto suite = run_bound_suite(small_problem(), small_config(), s);
  for (auto kind : {kBoundF, kBoundG, kBoundMin, kBoundLipschitz}) EXPECT_EQ(suite.report(kind).value, 0.0);
  EXPECT_GT(suite.report(kBoundNegrea31).value, 0.0);
}

TEST(BoundSuite, BoundsCoverGapOnSmallProblem) {
  const auto suite = run_bound_suite(small_problem(), small_config(), small_settings());
  for (const auto& r : suite.reports)
    EXPECT_GE(r.value, r.gen_gap - 3.0 * std::hypot(r.stderr, r.gen_gap_stderr)) << r.name;
}

TEST(BoundSuite, EmpiricalGapAgreesWithPopulationGap) {
  auto s = small_settings();
  s.n_outer = 64;
  const auto suite = run_bound_suite(small_problem(), small_config(), s);
  EXPECT_LE(std::abs(suite.gen_gap.value - suite.emp_gen_gap.value),
            3.0 * std::hypot(suite.gen_gap.stderr, suite.emp_gen_gap.stderr) + 0.01);
}

TEST(BoundSuite, InputValidation) {
  auto s = small_settings();
  s.n_outer = 1;
  EXPECT_THROW(run_bound_suite(small_problem(), small_config(), s), UsageError);
  EXPECT_THROW(run_bound_suite(small_problem(), small_config(1.0, 0.0), small_settings()), UsageError);
  auto p = small_problem();
  p.loss.lipschitz.reset();
  EXPECT_THROW(estimate_bound_lipschitz(p, small_config(), small_settings()), UsageError);
  EXPECT_THROW(estimate_bound_negrea31(p, small_config(), small_settings()), UsageError);
}

TEST(BoundSuite, EntryPointsMatchSuite) {
  const auto suite = run_bound_suite(small_problem(), small_config(), small_settings());
  EXPECT_EQ(estimate_bound_f(small_problem(), small_config(), small_settings()).value, suite.report(kBoundF).value);
  EXPECT_EQ(estimate_bound_min(small_problem(), small_config(), small_settings()).value, suite.report(kBoundMin).value);
  EXPECT_EQ(estimate_gen_gap(small_problem(), small_config(), small_settings()).value, suite.gen_gap.value);
}

TEST(BoundSuite, MeanEstimationProblemRuns) {
  const auto p = mean_estimation_problem(8, {0.5, -0.5}, 1.0, 1.0, 2000, 3);
  const auto suite = run_bound_suite(p, small_config(0.5, 0.3), small_settings());
  EXPECT_LE(suite.report(kBoundMin).value, suite.report(kBoundF).value);
  EXPECT_LE(suite.report(kBoundF).value, suite.report(kBoundLipschitz).value);
}

TEST(Crossover, RootNearTwoPointTwoOne) {
  const auto c = crossover_root(0.5, 1);
  ASSERT_TRUE(c.has_value());
  const double r = std::sqrt(2.0 * *c);
  EXPECT_GE(r, 2.20);
  EXPECT_LE(r, 2.22);
  EXPECT_EQ(crossover_root(0.5, 0), c);
  EXPECT_FALSE(crossover_root(1.0, 1).has_value());
}

TEST(Crossover, ScanChangesSignAtRoot) {
  const double root = *crossover_root(0.5, 1);
  for (const auto& p : crossover_scan(0.5, 1, 0.01, 6.0, 300)) {
    if (p.c < root - 1e-9) {
      EXPECT_LT(p.f, p.g) << p.c;
    } else if (p.c > root + 1e-9) {
      EXPECT_GT(p.f, p.g) << p.c;
    }
  }
  EXPECT_THROW(crossover_scan(0.5, 1, 1.0, 0.5, 10), UsageError);
}

}  // namespace
}  // namespace genbound
