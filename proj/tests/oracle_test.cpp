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

#include "genbound/oracle.hpp"
#include "support/random_problem.hpp"

namespace genbound {
namespace {

double binary_entropy(double q) { return -q * std::log(q) - (1.0 - q) * std::log(1.0 - q); }

TEST(Memorizing, FrozenValues) {
  const auto s = summarize(memorizing_problem());
  EXPECT_NEAR(s.gap.gen, 0.5, 1e-15);
  EXPECT_NEAR(s.gap.emp_gen, 0.5, 1e-15);
  EXPECT_NEAR(s.prop1, std::sqrt(0.5 * std::log(2.0)), 1e-12);
  EXPECT_NEAR(s.prop1, 0.58871, 1e-5);
  EXPECT_NEAR(s.prop3, std::sqrt(std::log(2.0)), 1e-12);
  EXPECT_NEAR(s.prop3, 0.83256, 1e-5);
  EXPECT_NEAR(s.chain_standard[0], std::log(2.0), 1e-12);
  EXPECT_NEAR(s.chain_randomized[0], 0.5 * std::log(2.0), 1e-12);
  for (const auto& r : check_invariants(s)) EXPECT_TRUE(r.passed) << r.name;
}

// N = 1, Z uniform on {0, 1}, l = 1{w != z}, Gibbs at beta: W = Z with
// probability q = 1 / (1 + e^{-beta}). Then E[gen] = q - 1/2,
// I(W; Z) = log 2 - h(q) and I(W; U | Zt) = (log 2 - h(q)) / 2.
class GibbsCoin : public ::testing::TestWithParam<double> {};

TEST_P(GibbsCoin, ClosedForms) {
  const double beta = GetParam();
  const auto p = gibbs_problem({0.5, 0.5}, 1, {{0.0, 1.0}, {1.0, 0.0}}, 0.0, 1.0, beta);
  const double q = 1.0 / (1.0 + std::exp(-beta));
  const double info = std::log(2.0) - binary_entropy(q);
  const auto s = summarize(p);
  EXPECT_NEAR(s.gap.gen, q - 0.5, 1e-14);
  EXPECT_NEAR(s.prop1, std::sqrt(0.5 * info), 1e-9);
  EXPECT_NEAR(s.prop3, std::sqrt(info), 1e-9);
  // Single sample: the random-subset bound has nothing to average over.
  EXPECT_NEAR(s.prop2[0], s.prop1, 1e-12);
  for (const auto& r : check_invariants(s)) EXPECT_TRUE(r.passed) << r.name;
}

INSTANTIATE_TEST_SUITE_P(Betas, GibbsCoin, ::testing::Values(0.1, 0.5, 1.0, 2.0, 5.0));

TEST(Gibbs, BetaZeroIsDataIndependent) {
  const auto p = gibbs_problem({0.2, 0.3, 0.5}, 2, {{0.0, 0.5, 1.0}, {1.0, 0.2, 0.1}, {0.3, 0.3, 0.3}}, 0.0, 1.0, 0.0);
  const auto s = summarize(p);
  EXPECT_NEAR(s.gap.gen, 0.0, 1e-15);
  EXPECT_NEAR(s.prop1, 0.0, 1e-7);
  EXPECT_NEAR(s.prop3, 0.0, 1e-7);
  for (double v : s.prop2) EXPECT_NEAR(v, 0.0, 1e-7);
  for (double v : s.prop4) EXPECT_NEAR(v, 0.0, 1e-7);
  for (double v : s.chain_randomized) EXPECT_NEAR(v, 0.0, 1e-14);
  for (double v : s.chain_standard) EXPECT_NEAR(v, 0.0, 1e-14);
}

TEST(Enumeration, JointSizesAndNames) {
  const auto p = testing::random_problem(4);
  const auto ej = enumerate_joint(p);
  std::size_t expected = p.w_count;
  for (std::size_t k = 0; k < 2 * p.n; ++k) expected *= p.z_count();
  expected <<= p.n;
  EXPECT_EQ(ej.joint.state_count(), expected);
  EXPECT_TRUE(ej.joint.has("Zt1"));
  EXPECT_TRUE(ej.joint.has("U1"));
  EXPECT_TRUE(ej.joint.has("W"));
  const auto sj = enumerate_standard_joint(p);
  EXPECT_TRUE(sj.joint.has("Z1"));
}

TEST(Enumeration, OverflowIsReported) {
  EXPECT_NO_THROW(detail::checked_states(3, 6, 8 * 8));
  EXPECT_THROW(detail::checked_states(10, 16, 2 * 256), EnumerationOverflow);
}

TEST(Problem, ValidationRejectsBadShapes) {
  auto p = memorizing_problem();
  p.algo_kernel[0] = {0.5, 0.6};
  EXPECT_THROW(p.validate(), DistributionError);
  p = memorizing_problem();
  p.loss_table[0][0] = 2.0;
  EXPECT_THROW(p.validate(), UsageError);
  p = memorizing_problem();
  p.algo_kernel.pop_back();
  EXPECT_THROW(p.validate(), UsageError);
}

TEST(Problem, DatasetCodesRoundTrip) {
  DiscreteProblem p;
  p.z_pmf = {0.2, 0.3, 0.5};
  p.n = 3;
  for (std::size_t code = 0; code < p.dataset_count(); ++code) {
    const auto s = p.dataset_from_code(code);
    EXPECT_EQ(p.dataset_code(s), code);
  }
  EXPECT_EQ(p.dataset_code(std::vector<std::size_t>{1, 0, 0}), 9u);
}

TEST(Subsets, AllSubsetsCountIsBinomial) {
  EXPECT_EQ(all_subsets(4, 2).size(), 6u);
  EXPECT_EQ(all_subsets(3, 3).size(), 1u);
  EXPECT_EQ(all_subsets(3, 1).size(), 3u);
}

// Property sweep over random small problems.
class RandomProblem : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(RandomProblem, IdentityChainsAndValidity) {
  const auto p = testing::random_problem(GetParam());
  const auto s = summarize(p);
  EXPECT_LE(std::abs(s.gap.gen - s.gap.emp_gen), 1e-12);
  for (const auto& r : check_invariants(s)) EXPECT_TRUE(r.passed) << r.name << " slack " << r.slack;
}

TEST_P(RandomProblem, BoundsShrinkWithNoInformation) {
  // Replacing the kernel by its average over datasets makes W independent of S.
  auto p = testing::random_problem(GetParam());
  std::vector<double> avg(p.w_count, 0.0);
  for (std::size_t code = 0; code < p.dataset_count(); ++code) {
    const auto s = p.dataset_from_code(code);
    double ps = 1.0;
    for (auto z : s) ps *= p.z_pmf[z];
    for (std::size_t w = 0; w < p.w_count; ++w) avg[w] += ps * p.algo_kernel[code][w];
  }
  for (auto& row : p.algo_kernel) row = avg;
  const auto s = summarize(p);
  EXPECT_NEAR(s.gap.gen, 0.0, 1e-12);
  EXPECT_NEAR(s.prop1, 0.0, 1e-6);
  EXPECT_NEAR(s.prop3, 0.0, 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomProblem, ::testing::Range<std::uint64_t>(0, 30));

}  // namespace
}  // namespace genbound
