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

#ifndef GENBOUND_INFO_HPP
#define GENBOUND_INFO_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "genbound/core.hpp"
#include "genbound/errors.hpp"
#include "genbound/rng.hpp"

// Information measures in nats. Conventions: 0 log(0/q) = 0, and an infinite
// divergence is reported as kInfiniteDivergence (+inf), which poisons any sum
// it enters.

namespace genbound {

inline constexpr double kInfiniteDivergence = std::numeric_limits<double>::infinity();
inline constexpr double kJointTolerance = 1e-12;

struct Variable {
  std::string name;
  std::size_t size = 0;

  friend bool operator==(const Variable&, const Variable&) = default;
};

using VarGroup = std::vector<std::string>;

// Probability table over the product of finite variables. Storage is
// row-major: the last variable varies fastest.
class FiniteJoint {
 public:
  FiniteJoint(std::vector<Variable> vars, std::vector<double> probs,
              double tolerance = kJointTolerance)
      : vars_(std::move(vars)), probs_(std::move(probs)) {
    std::size_t states = 1;
    std::unordered_set<std::string> seen;
    for (const auto& v : vars_) {
      if (v.size == 0) throw UsageError("variable '" + v.name + "' has an empty domain");
      if (!seen.insert(v.name).second) throw UsageError("duplicate variable '" + v.name + "'");
      states *= v.size;
    }
    if (probs_.size() != states) throw DistributionError("table does not cover the product domain");
    double total = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0) || !std::isfinite(p)) throw DistributionError("negative or non-finite probability");
      total += p;
    }
    if (std::abs(total - 1.0) > tolerance)
      throw DistributionError("joint sums to " + std::to_string(total));
    strides_.assign(vars_.size(), 1);
    for (std::size_t k = vars_.size(); k-- > 1;) strides_[k - 1] = strides_[k] * vars_[k].size;
  }

  const std::vector<Variable>& vars() const { return vars_; }
  std::span<const double> probs() const { return probs_; }
  std::size_t state_count() const { return probs_.size(); }

  bool has(std::string_view name) const {
    return std::any_of(vars_.begin(), vars_.end(), [&](const Variable& v) { return v.name == name; });
  }

  std::size_t index_of(std::string_view name) const {
    for (std::size_t k = 0; k < vars_.size(); ++k)
      if (vars_[k].name == name) return k;
    throw UsageError("unknown variable '" + std::string(name) + "'");
  }

  std::size_t encode(std::span<const std::size_t> coords) const {
    std::size_t flat = 0;
    for (std::size_t k = 0; k < vars_.size(); ++k) flat += coords[k] * strides_[k];
    return flat;
  }

  std::vector<std::size_t> decode(std::size_t flat) const {
    std::vector<std::size_t> coords(vars_.size());
    for (std::size_t k = 0; k < vars_.size(); ++k) {
      coords[k] = flat / strides_[k];
      flat %= strides_[k];
    }
    return coords;
  }

  double prob(std::span<const std::size_t> coords) const { return probs_[encode(coords)]; }

  // Marginal over `names`, with the variables in the order given.
  FiniteJoint marginal(const VarGroup& names) const {
    std::vector<Variable> kept;
    std::vector<std::size_t> positions;
    for (const auto& n : names) {
      positions.push_back(index_of(n));
      kept.push_back(vars_[positions.back()]);
    }
    std::vector<std::size_t> target_stride(vars_.size(), 0);
    std::size_t stride = 1;
    for (std::size_t k = positions.size(); k-- > 0;) {
      target_stride[positions[k]] = stride;
      stride *= kept[k].size;
    }
    std::vector<double> out(stride, 0.0);
    std::vector<std::size_t> coords(vars_.size(), 0);
    std::size_t target = 0;
    for (std::size_t flat = 0; flat < probs_.size(); ++flat) {
      out[target] += probs_[flat];
      // odometer increment, last variable fastest
      for (std::size_t k = vars_.size(); k-- > 0;) {
        if (++coords[k] < vars_[k].size) {
          target += target_stride[k];
          break;
        }
        target -= target_stride[k] * (vars_[k].size - 1);
        coords[k] = 0;
      }
    }
    return FiniteJoint(std::move(kept), std::move(out), 1e-9);
  }

 private:
  std::vector<Variable> vars_;
  std::vector<double> probs_;
  std::vector<std::size_t> strides_;
};

namespace detail {

// sum_x p(x) log(p(x) / q(x)) over aligned tables.
inline double kl_tables(std::span<const double> p, std::span<const double> q) {
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] == 0.0) continue;
    if (q[k] == 0.0) throw DivergenceUndefined("P is not absolutely continuous w.r.t. Q");
    total += p[k] * std::log(p[k] / q[k]);
  }
  // Gibbs: the exact value is >= 0; only rounding can push it below.
  return std::max(total, 0.0);
}

inline void require_disjoint(std::initializer_list<const VarGroup*> groups, bool allow_empty_last) {
  std::unordered_set<std::string> seen;
  std::size_t idx = 0;
  for (const auto* g : groups) {
    ++idx;
    if (g->empty() && !(allow_empty_last && idx == groups.size()))
      throw UsageError("variable group must be non-empty");
    for (const auto& n : *g)
      if (!seen.insert(n).second) throw UsageError("variable groups overlap on '" + n + "'");
  }
}

inline VarGroup concat(std::initializer_list<const VarGroup*> groups) {
  VarGroup out;
  for (const auto* g : groups) out.insert(out.end(), g->begin(), g->end());
  return out;
}

inline std::size_t group_states(const FiniteJoint& joint, const VarGroup& g) {
  std::size_t s = 1;
  for (const auto& n : g) s *= joint.vars()[joint.index_of(n)].size;
  return s;
}

}  // namespace detail

// KL(p || q) for tables over identical variables.
inline double kl(const FiniteJoint& p, const FiniteJoint& q) {
  if (p.vars() != q.vars()) throw UsageError("KL between tables over different variables");
  return detail::kl_tables(p.probs(), q.probs());
}

// I(A; B) = KL(P_{A,B} || P_A x P_B).
inline double mutual_information(const FiniteJoint& joint, const VarGroup& a, const VarGroup& b) {
  detail::require_disjoint({&a, &b}, false);
  const FiniteJoint pab = joint.marginal(detail::concat({&a, &b}));
  const FiniteJoint pa = pab.marginal(a);
  const FiniteJoint pb = pab.marginal(b);
  std::vector<double> product(pab.state_count());
  const std::size_t nb = pb.state_count();
  for (std::size_t i = 0; i < pa.state_count(); ++i)
    for (std::size_t j = 0; j < nb; ++j) product[i * nb + j] = pa.probs()[i] * pb.probs()[j];
  return kl(pab, FiniteJoint(pab.vars(), std::move(product), 1e-9));
}

// One conditioning state c of a conditional divergence profile.
struct ConditionalTerm {
  double weight;      // P_C(c)
  double divergence;  // KL(P_{A,B|c} || P_{A|c} x R_B)
};

/// Per-state divergences KL(P_{A,B|C=c} || P_{A|C=c} x R_B) for every c with
/// P_C(c) > 0.
///
/// With `reference_b_unconditional` false, R_B = P_{B|C=c}, and the weighted
/// sum of the profile is I(A;B|C). With it true, R_B = P_B, which is the
/// product measure Q x P_{B} used by the random-subset bounds when B is
/// independent of C. An empty C yields a single term.
inline std::vector<ConditionalTerm> conditional_kl_profile(const FiniteJoint& joint,
                                                           const VarGroup& a, const VarGroup& b,
                                                           const VarGroup& c,
                                                           bool reference_b_unconditional = false) {
  detail::require_disjoint({&a, &b, &c}, true);
  const FiniteJoint pcab = joint.marginal(detail::concat({&c, &a, &b}));
  const std::size_t na = detail::group_states(joint, a);
  const std::size_t nb = detail::group_states(joint, b);
  const std::size_t block = na * nb;
  const std::size_t nc = pcab.state_count() / block;

  std::vector<double> pb_marginal;
  if (reference_b_unconditional) {
    const auto m = joint.marginal(b);
    pb_marginal.assign(m.probs().begin(), m.probs().end());
  }

  std::vector<ConditionalTerm> terms;
  std::vector<double> pab(block), ref(block), pa(na), pb(nb);
  for (std::size_t ci = 0; ci < nc; ++ci) {
    const auto tab = pcab.probs().subspan(ci * block, block);
    double pc = 0.0;
    for (double v : tab) pc += v;
    if (pc == 0.0) continue;
    std::fill(pa.begin(), pa.end(), 0.0);
    std::fill(pb.begin(), pb.end(), 0.0);
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j) {
        const double v = tab[i * nb + j] / pc;
        pab[i * nb + j] = v;
        pa[i] += v;
        pb[j] += v;
      }
    const auto& rb = reference_b_unconditional ? pb_marginal : pb;
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j) ref[i * nb + j] = pa[i] * rb[j];
    terms.push_back({pc, detail::kl_tables(pab, ref)});
  }
  return terms;
}

// I(A; B | C) = E_{P_C}[KL(P_{A,B|C} || P_{A|C} x P_{B|C})]. States of C
// with zero probability contribute nothing.
inline double conditional_mutual_information(const FiniteJoint& joint, const VarGroup& a,
                                             const VarGroup& b, const VarGroup& c) {
  double total = 0.0;
  for (const auto& term : conditional_kl_profile(joint, a, b, c)) total += term.weight * term.divergence;
  return total;
}

// H(A | C); C may be empty.
inline double conditional_entropy(const FiniteJoint& joint, const VarGroup& a, const VarGroup& c) {
  detail::require_disjoint({&a, &c}, true);
  const FiniteJoint pca = joint.marginal(detail::concat({&c, &a}));
  const std::size_t na = detail::group_states(joint, a);
  double h = 0.0;
  for (std::size_t ci = 0; ci < pca.state_count() / na; ++ci) {
    const auto tab = pca.probs().subspan(ci * na, na);
    double pc = 0.0;
    for (double v : tab) pc += v;
    for (double v : tab)
      if (v > 0.0) h -= v * std::log(v / pc);
  }
  return std::max(h, 0.0);
}

// ---------------------------------------------------------------------------
// Gaussians with covariance sigma^2 I.

struct IsotropicGaussian {
  Vector mean;
  double sigma = 1.0;
};

inline void validate_gaussian(const IsotropicGaussian& g) {
  if (!(g.sigma > 0.0) || !std::isfinite(g.sigma)) throw UsageError("Gaussian scale must be positive");
  if (g.mean.empty() || !all_finite(g.mean)) throw UsageError("Gaussian mean must be finite, d >= 1");
}

// KL(N(m, s^2 I) || N(m', s^2 I)) = ||m - m'||^2 / (2 s^2). Equal scales only.
inline double gaussian_kl_isotropic(const IsotropicGaussian& p, const IsotropicGaussian& q) {
  validate_gaussian(p);
  validate_gaussian(q);
  if (p.sigma != q.sigma) throw UnsupportedCase("Gaussian KL implemented for equal scales only");
  if (p.mean.size() != q.mean.size()) throw UsageError("Gaussian dimension mismatch");
  double d2 = 0.0;
  for (std::size_t k = 0; k < p.mean.size(); ++k) d2 += (p.mean[k] - q.mean[k]) * (p.mean[k] - q.mean[k]);
  return d2 / (2.0 * p.sigma * p.sigma);
}

/// Upper bound on KL(N_u || (1 - pi) N_0 + pi N_1), where N_0 and N_1 share a
/// scale and KL(N_0 || N_1) = c, and N_u is the component selected by the bit
/// u:
///
///   -log(|u - pi| e^{-c} + |(1 - pi) - u|).
///
/// Non-negative and nondecreasing in c; as c -> inf it tends to
/// -log|(1 - pi) - u| from below. Returns kInfiniteDivergence when the mixture
/// puts no weight on the selected component and c = inf.
inline double mixture_gaussian_kl_bound(double c, double pi, int u) {
  if (!(c >= 0.0)) throw UsageError("mixture bound needs c >= 0");
  if (!(pi >= 0.0 && pi <= 1.0)) throw UsageError("mixture weight must lie in [0, 1]");
  if (u != 0 && u != 1) throw UsageError("selection bit must be 0 or 1");
  const double wrong = std::abs(static_cast<double>(u) - pi);
  const double right = std::abs((1.0 - pi) - static_cast<double>(u));
  const double inner = wrong * std::exp(-c) + right;
  if (inner <= 0.0) return kInfiniteDivergence;
  const double v = -std::log(inner);
  return v > 0.0 ? v : 0.0;
}

struct McEstimate {
  double value = 0.0;
  double stderr = 0.0;
  std::size_t samples = 0;
};

/// Monte Carlo estimate of KL(p || (1 - pi) q0 + pi q1) with its standard
/// error. All three Gaussians must share the same scale.
inline McEstimate gaussian_vs_mixture_kl_mc(const IsotropicGaussian& p, const IsotropicGaussian& q0,
                                            const IsotropicGaussian& q1, double pi,
                                            std::size_t nsamples, std::uint64_t seed) {
  validate_gaussian(p);
  validate_gaussian(q0);
  validate_gaussian(q1);
  if (p.sigma != q0.sigma || p.sigma != q1.sigma) throw UnsupportedCase("mixture MC needs equal scales");
  if (q0.mean.size() != p.mean.size() || q1.mean.size() != p.mean.size())
    throw UsageError("Gaussian dimension mismatch");
  if (!(pi >= 0.0 && pi <= 1.0)) throw UsageError("mixture weight must lie in [0, 1]");
  if (nsamples < 1000) throw UsageError("mixture MC needs at least 1000 samples");

  const double inv2s2 = 1.0 / (2.0 * p.sigma * p.sigma);
  const std::size_t d = p.mean.size();
  auto rng = make_rng(seed, Stream::kGeneric);
  std::normal_distribution<double> gauss(0.0, p.sigma);
  Vector x(d);
  auto neg_energy = [&](const Vector& m) {
    double r2 = 0.0;
    for (std::size_t k = 0; k < d; ++k) r2 += (x[k] - m[k]) * (x[k] - m[k]);
    return -r2 * inv2s2;
  };

  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t s = 0; s < nsamples; ++s) {
    for (std::size_t k = 0; k < d; ++k) x[k] = p.mean[k] + gauss(rng);
    const double lp = neg_energy(p.mean);
    const double e0 = neg_energy(q0.mean);
    const double e1 = neg_energy(q1.mean);
    // log((1 - pi) e^{e0} + pi e^{e1}) over the components with positive weight
    double m = -std::numeric_limits<double>::infinity();
    if (pi < 1.0) m = std::max(m, e0);
    if (pi > 0.0) m = std::max(m, e1);
    double acc = 0.0;
    if (pi < 1.0) acc += (1.0 - pi) * std::exp(e0 - m);
    if (pi > 0.0) acc += pi * std::exp(e1 - m);
    const double term = lp - (std::log(acc) + m);
    sum += term;
    sum_sq += term * term;
  }
  const double n = static_cast<double>(nsamples);
  const double mean = sum / n;
  const double var = std::max(sum_sq / n - mean * mean, 0.0) * n / (n - 1.0);
  return {mean, std::sqrt(var / n), nsamples};
}

}  // namespace genbound

#endif  // GENBOUND_INFO_HPP
