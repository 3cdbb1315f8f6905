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

#ifndef GENBOUND_CORE_HPP
#define GENBOUND_CORE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "genbound/errors.hpp"
#include "genbound/rng.hpp"

namespace genbound {

using Vector = std::vector<double>;

// A sample of an SGLD problem: feature vector and a real label. Problems
// without labels (mean estimation) leave y at 0.
struct LabeledPoint {
  Vector x;
  double y = 0.0;
};

// Index into the declared finite sample space of an oracle problem.
using FiniteSample = std::size_t;
// Index into the finite hypothesis set of an oracle problem.
using FiniteHypothesis = std::size_t;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double squared_norm(std::span<const double> a) { return dot(a, a); }

inline bool all_finite(std::span<const double> a) {
  return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

// Checks the parametrized-hypothesis invariants: d >= 1, all coordinates finite.
inline void validate_hypothesis(std::span<const double> theta) {
  if (theta.empty()) throw UsageError("hypothesis must have dimension >= 1");
  if (!all_finite(theta)) throw UsageError("hypothesis has non-finite coordinates");
}

/// Bounded loss l: (W, Z) -> [a, b].
///
/// `grad` is only required for parametrized hypotheses (W = Vector) and
/// returns the gradient in the parameters. `lipschitz`, when set, bounds the
/// gradient norm uniformly.
template <class W, class Z>
struct LossSpec {
  double a = 0.0;
  double b = 1.0;
  std::optional<double> lipschitz;
  std::function<double(const W&, const Z&)> eval;
  std::function<Vector(const W&, const Z&)> grad;

  double range() const { return b - a; }

  // Subgaussianity parameter of a loss bounded in [a, b] (Hoeffding).
  double subgaussian_sigma() const { return (b - a) / 2.0; }
};

template <class W, class Z>
void validate_loss(const LossSpec<W, Z>& loss) {
  if (!(loss.a < loss.b)) throw UsageError("loss bounds require a < b");
  if (!loss.eval) throw UsageError("loss has no eval function");
  if (loss.lipschitz && !(*loss.lipschitz >= 0.0))
    throw UsageError("Lipschitz constant must be non-negative");
}

// Exact finite distribution: `pmf[k]` is the probability of `support[k]`.
template <class Z>
struct ExactFinite {
  std::vector<Z> support;
  std::vector<double> pmf;
};

// Seeded generator; population risk is a Monte Carlo mean over
// `population_eval_budget` draws from the kPopulation stream of `seed`.
template <class Z>
struct Sampler {
  std::function<Z(Rng&)> draw;
  std::size_t population_eval_budget = 0;
  std::uint64_t seed = 0;
};

template <class Z>
using DataDistribution = std::variant<ExactFinite<Z>, Sampler<Z>>;

inline constexpr double kPmfTolerance = 1e-12;

inline void validate_pmf(std::span<const double> pmf) {
  if (pmf.empty()) throw DistributionError("empty pmf");
  double total = 0.0;
  for (double p : pmf) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw DistributionError("pmf has a negative or non-finite entry");
    total += p;
  }
  if (std::abs(total - 1.0) > kPmfTolerance)
    throw DistributionError("pmf sums to " + std::to_string(total) + ", not 1");
}

// Exact distribution over the integers 0..k-1, used by oracle problems.
inline ExactFinite<FiniteSample> finite_distribution(std::vector<double> pmf) {
  validate_pmf(pmf);
  ExactFinite<FiniteSample> dist;
  dist.support.resize(pmf.size());
  std::iota(dist.support.begin(), dist.support.end(), FiniteSample{0});
  dist.pmf = std::move(pmf);
  return dist;
}

template <class Z>
std::vector<Z> draw_samples(const Sampler<Z>& sampler, std::size_t count, Rng& rng) {
  std::vector<Z> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(sampler.draw(rng));
  return out;
}

/// Population risk E_{P_Z}[l(w, Z)]: exact for finite distributions, a Monte
/// Carlo mean otherwise.
template <class W, class Z>
double population_risk(const W& w, const LossSpec<W, Z>& loss,
                       const DataDistribution<Z>& dist) {
  if (const auto* exact = std::get_if<ExactFinite<Z>>(&dist)) {
    validate_pmf(exact->pmf);
    if (exact->support.size() != exact->pmf.size())
      throw DistributionError("support and pmf sizes differ");
    double risk = 0.0;
    for (std::size_t k = 0; k < exact->pmf.size(); ++k)
      if (exact->pmf[k] > 0.0) risk += exact->pmf[k] * loss.eval(w, exact->support[k]);
    return risk;
  }
  const auto& sampler = std::get<Sampler<Z>>(dist);
  if (sampler.population_eval_budget == 0)
    throw UsageError("sampler population_eval_budget must be >= 1");
  auto rng = make_rng(sampler.seed, Stream::kPopulation);
  double sum = 0.0;
  for (std::size_t k = 0; k < sampler.population_eval_budget; ++k)
    sum += loss.eval(w, sampler.draw(rng));
  return sum / static_cast<double>(sampler.population_eval_budget);
}

/// Empirical risk L_S(w) = (1/N) sum_i l(w, Z_i).
template <class W, class Z>
double empirical_risk(const W& w, const LossSpec<W, Z>& loss, std::span<const Z> data) {
  if (data.empty()) throw UsageError("empirical risk of an empty dataset");
  double sum = 0.0;
  for (const auto& z : data) sum += loss.eval(w, z);
  return sum / static_cast<double>(data.size());
}

template <class W, class Z>
double empirical_risk(const W& w, const LossSpec<W, Z>& loss, const std::vector<Z>& data) {
  return empirical_risk(w, loss, std::span<const Z>(data));
}

// Max over coordinates of |central difference - analytic gradient|.
template <class Z>
double grad_check(const LossSpec<Vector, Z>& loss, const Vector& w, const Z& z, double h) {
  if (!(h > 0.0)) throw UsageError("finite-difference step must be positive");
  const Vector g = loss.grad(w, z);
  if (g.size() != w.size()) throw UsageError("gradient dimension mismatch");
  double worst = 0.0;
  Vector probe = w;
  for (std::size_t k = 0; k < w.size(); ++k) {
    probe[k] = w[k] + h;
    const double up = loss.eval(probe, z);
    probe[k] = w[k] - h;
    const double down = loss.eval(probe, z);
    probe[k] = w[k];
    worst = std::max(worst, std::abs((up - down) / (2.0 * h) - g[k]));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Shipped losses.

// l == c everywhere; gradient zero.
template <class W, class Z>
LossSpec<W, Z> constant_loss(double c, std::size_t dim = 1) {
  LossSpec<W, Z> loss;
  loss.a = c - 0.5;
  loss.b = c + 0.5;
  loss.lipschitz = 0.0;
  loss.eval = [c](const W&, const Z&) { return c; };
  loss.grad = [dim](const W&, const Z&) { return Vector(dim, 0.0); };
  return loss;
}

// l(theta, (x, y)) = 1 / (1 + exp(y <theta, x>)) in [0, 1]. Its gradient norm
// is at most |y| ||x|| / 4, so for |y| = 1 and ||x|| <= radius the loss is
// (radius / 4)-Lipschitz.
inline LossSpec<Vector, LabeledPoint> sigmoid_loss(double feature_radius) {
  LossSpec<Vector, LabeledPoint> loss;
  loss.a = 0.0;
  loss.b = 1.0;
  loss.lipschitz = feature_radius / 4.0;
  loss.eval = [](const Vector& theta, const LabeledPoint& z) {
    return 1.0 / (1.0 + std::exp(z.y * dot(theta, z.x)));
  };
  loss.grad = [](const Vector& theta, const LabeledPoint& z) {
    const double s = 1.0 / (1.0 + std::exp(z.y * dot(theta, z.x)));
    const double scale = -s * (1.0 - s) * z.y;
    Vector g(z.x.size());
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = scale * z.x[k];
    return g;
  };
  return loss;
}

// Mean estimation: l(theta, x) = 1 - exp(-||theta - x||^2 / (2 w^2)) in [0, 1],
// Lipschitz with constant exp(-1/2) / w.
inline LossSpec<Vector, LabeledPoint> gaussian_bump_loss(double width) {
  if (!(width > 0.0)) throw UsageError("bump width must be positive");
  LossSpec<Vector, LabeledPoint> loss;
  loss.a = 0.0;
  loss.b = 1.0;
  loss.lipschitz = std::exp(-0.5) / width;
  const double inv2w2 = 1.0 / (2.0 * width * width);
  loss.eval = [inv2w2](const Vector& theta, const LabeledPoint& z) {
    double r2 = 0.0;
    for (std::size_t k = 0; k < theta.size(); ++k) r2 += (theta[k] - z.x[k]) * (theta[k] - z.x[k]);
    return 1.0 - std::exp(-r2 * inv2w2);
  };
  loss.grad = [inv2w2](const Vector& theta, const LabeledPoint& z) {
    double r2 = 0.0;
    for (std::size_t k = 0; k < theta.size(); ++k) r2 += (theta[k] - z.x[k]) * (theta[k] - z.x[k]);
    const double scale = 2.0 * inv2w2 * std::exp(-r2 * inv2w2);
    Vector g(theta.size());
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = scale * (theta[k] - z.x[k]);
    return g;
  };
  return loss;
}

// Loss given by a table l(w, z) = table[w][z] over finite spaces.
inline LossSpec<FiniteHypothesis, FiniteSample> table_loss(
    std::vector<std::vector<double>> table, double a, double b) {
  for (const auto& row : table)
    for (double v : row)
      if (v < a || v > b) throw UsageError("loss table entry outside [a, b]");
  LossSpec<FiniteHypothesis, FiniteSample> loss;
  loss.a = a;
  loss.b = b;
  loss.eval = [t = std::move(table)](const FiniteHypothesis& w, const FiniteSample& z) {
    return t.at(w).at(z);
  };
  return loss;
}

// ---------------------------------------------------------------------------
// Shipped SGLD data distributions.

// Binary classification: y uniform on {-1, +1}, x ~ N(y * center, spread^2 I)
// conditioned on ||x|| <= radius (rejection sampling).
inline Sampler<LabeledPoint> gaussian_mixture_sampler(Vector center, double spread,
                                                      double radius,
                                                      std::size_t population_budget = 0,
                                                      std::uint64_t seed = 0) {
  if (center.empty()) throw UsageError("mixture center must have dimension >= 1");
  if (!(spread > 0.0) || !(radius > 0.0)) throw UsageError("spread and radius must be positive");
  Sampler<LabeledPoint> s;
  s.population_eval_budget = population_budget;
  s.seed = seed;
  s.draw = [center = std::move(center), spread, radius](Rng& rng) {
    std::bernoulli_distribution coin(0.5);
    std::normal_distribution<double> gauss(0.0, spread);
    LabeledPoint z;
    z.y = coin(rng) ? 1.0 : -1.0;
    z.x.resize(center.size());
    do {
      for (std::size_t k = 0; k < center.size(); ++k) z.x[k] = z.y * center[k] + gauss(rng);
    } while (squared_norm(z.x) > radius * radius);
    return z;
  };
  return s;
}

// Mean estimation: x ~ N(mean, spread^2 I) with no label.
inline Sampler<LabeledPoint> gaussian_location_sampler(Vector mean, double spread,
                                                       std::size_t population_budget = 0,
                                                       std::uint64_t seed = 0) {
  if (mean.empty()) throw UsageError("mean must have dimension >= 1");
  if (!(spread > 0.0)) throw UsageError("spread must be positive");
  Sampler<LabeledPoint> s;
  s.population_eval_budget = population_budget;
  s.seed = seed;
  s.draw = [mean = std::move(mean), spread](Rng& rng) {
    std::normal_distribution<double> gauss(0.0, spread);
    LabeledPoint z;
    z.x.resize(mean.size());
    for (std::size_t k = 0; k < mean.size(); ++k) z.x[k] = mean[k] + gauss(rng);
    return z;
  };
  return s;
}

}  // namespace genbound

#endif  // GENBOUND_CORE_HPP
