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
#include <set>

#include "genbound/core.hpp"
#include "genbound/rng.hpp"

namespace genbound {
namespace {

TEST(Pmf, AcceptsNormalizedAndRejectsOthers) {
  EXPECT_NO_THROW(validate_pmf(std::vector<double>{0.25, 0.75}));
  EXPECT_NO_THROW(validate_pmf(std::vector<double>{1.0, 0.0}));
  EXPECT_THROW(validate_pmf(std::vector<double>{0.5, 0.6}), DistributionError);
  EXPECT_THROW(validate_pmf(std::vector<double>{1.5, -0.5}), DistributionError);
  EXPECT_THROW(validate_pmf(std::vector<double>{}), DistributionError);
  EXPECT_THROW(validate_pmf(std::vector<double>{NAN, 1.0}), DistributionError);
}

TEST(PopulationRisk, ExactOnFiniteDistribution) {
  const auto loss = table_loss({{0.0, 1.0}, {1.0, 0.0}}, 0.0, 1.0);
  DataDistribution<FiniteSample> dist = finite_distribution({0.3, 0.7});
  EXPECT_DOUBLE_EQ((population_risk<FiniteHypothesis, FiniteSample>(0, loss, dist)), 0.7);
  EXPECT_DOUBLE_EQ((population_risk<FiniteHypothesis, FiniteSample>(1, loss, dist)), 0.3);
}

TEST(PopulationRisk, SamplerNeedsBudget) {
  auto sampler = gaussian_location_sampler({0.0}, 1.0);
  DataDistribution<LabeledPoint> dist = sampler;
  const auto loss = gaussian_bump_loss(1.0);
  EXPECT_THROW(population_risk(Vector{0.0}, loss, dist), UsageError);
}

TEST(PopulationRisk, MonteCarloIsDeterministicAndClose) {
  // E[1 - exp(-x^2/2)] for x ~ N(0, 1) is 1 - 1/sqrt(2).
  DataDistribution<LabeledPoint> dist = gaussian_location_sampler({0.0}, 1.0, 200000, 3);
  const auto loss = gaussian_bump_loss(1.0);
  const double a = population_risk(Vector{0.0}, loss, dist);
  const double b = population_risk(Vector{0.0}, loss, dist);
  EXPECT_EQ(a, b);
  EXPECT_NEAR(a, 1.0 - 1.0 / std::sqrt(2.0), 5e-3);
}

TEST(EmpiricalRisk, MeanOverSamplesAndEmptyIsAnError) {
  const auto loss = table_loss({{0.0, 1.0}}, 0.0, 1.0);
  std::vector<FiniteSample> s{0, 1, 1, 1};
  EXPECT_DOUBLE_EQ((empirical_risk<FiniteHypothesis, FiniteSample>(0, loss, s)), 0.75);
  std::vector<FiniteSample> empty;
  EXPECT_THROW((empirical_risk<FiniteHypothesis, FiniteSample>(0, loss, empty)), UsageError);
}

TEST(ConstantLoss, EmpiricalEqualsPopulation) {
  const auto loss = constant_loss<Vector, LabeledPoint>(0.4, 2);
  DataDistribution<LabeledPoint> dist = gaussian_location_sampler({0.0, 0.0}, 1.0, 100, 1);
  std::vector<LabeledPoint> s(3, LabeledPoint{{1.0, 2.0}, 0.0});
  const Vector w{5.0, 5.0};
  EXPECT_NEAR(population_risk(w, loss, dist), empirical_risk(w, loss, s), 1e-14);
}

TEST(Losses, GradientsMatchFiniteDifferences) {
  auto rng = make_rng(11, Stream::kGeneric);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto sigmoid = sigmoid_loss(4.0);
  const auto bump = gaussian_bump_loss(0.7);
  for (int rep = 0; rep < 50; ++rep) {
    Vector w{gauss(rng), gauss(rng)};
    LabeledPoint z{{gauss(rng), gauss(rng)}, rep % 2 ? 1.0 : -1.0};
    EXPECT_LT(grad_check(sigmoid, w, z, 1e-5), 1e-8);
    EXPECT_LT(grad_check(bump, w, z, 1e-5), 1e-8);
  }
}

TEST(Losses, GradientNormsRespectLipschitzConstants) {
  auto rng = make_rng(12, Stream::kGeneric);
  const double radius = 3.0;
  const auto sampler = gaussian_mixture_sampler({1.0, 0.5}, 1.5, radius);
  const auto sigmoid = sigmoid_loss(radius);
  const auto bump = gaussian_bump_loss(0.5);
  std::normal_distribution<double> gauss(0.0, 2.0);
  for (int rep = 0; rep < 2000; ++rep) {
    const auto z = sampler.draw(rng);
    EXPECT_LE(squared_norm(z.x), radius * radius);
    const Vector w{gauss(rng), gauss(rng)};
    EXPECT_LE(std::sqrt(squared_norm(sigmoid.grad(w, z))), *sigmoid.lipschitz);
    EXPECT_LE(std::sqrt(squared_norm(bump.grad(w, z))), *bump.lipschitz * (1.0 + 1e-12));
    const double v = sigmoid.eval(w, z);
    EXPECT_GE(v, sigmoid.a);
    EXPECT_LE(v, sigmoid.b);
  }
}

TEST(Losses, SubgaussianScaleIsHalfRange) {
  const auto loss = table_loss({{0.0, 2.0}}, -1.0, 3.0);
  EXPECT_DOUBLE_EQ(loss.range(), 4.0);
  EXPECT_DOUBLE_EQ(loss.subgaussian_sigma(), 2.0);
  EXPECT_THROW(table_loss({{0.0, 5.0}}, 0.0, 1.0), UsageError);
}

TEST(Rng, StreamsAndCoordinatesAreIndependentAndReproducible) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t o = 0; o < 20; ++o)
    for (auto s : {Stream::kSupersample, Stream::kNoise, Stream::kInit}) seen.insert(derive_seed(7, s, {o}));
  EXPECT_EQ(seen.size(), 60u);
  auto a = make_rng(5, Stream::kNoise, {1, 2});
  auto b = make_rng(5, Stream::kNoise, {1, 2});
  for (int k = 0; k < 10; ++k) EXPECT_EQ(a(), b());
  auto c = make_rng(5, Stream::kNoise, {2, 1});
  EXPECT_NE(make_rng(5, Stream::kNoise, {1, 2})(), c());
}

TEST(Hypothesis, NonFiniteRejected) {
  EXPECT_NO_THROW(validate_hypothesis(Vector{1.0, 2.0}));
  EXPECT_THROW(validate_hypothesis(Vector{1.0, INFINITY}), UsageError);
}

}  // namespace
}  // namespace genbound
