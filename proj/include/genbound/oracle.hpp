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

#ifndef GENBOUND_ORACLE_HPP
#define GENBOUND_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "genbound/core.hpp"
#include "genbound/info.hpp"
#include "genbound/subsample.hpp"

// Exhaustive enumeration of tiny discrete learning problems. Every bound here
// instantiates the comparison distribution Q as the exact conditional
// marginal of W and takes the auxiliary randomness R to be trivial.

namespace genbound {

inline constexpr std::size_t kMaxEnumeratedStates = 10'000'000;

/// A finite learning problem: samples in {0..|Z|-1} drawn from `z_pmf`,
/// datasets of size `n`, hypotheses {0..w_count-1}.
///
/// `algo_kernel[code][w]` is P(W = w | S = s) where `code` is the base-|Z|
/// number of the dataset with the first sample most significant.
struct DiscreteProblem {
  std::vector<double> z_pmf;
  std::size_t n = 1;
  std::size_t w_count = 1;
  std::vector<std::vector<double>> algo_kernel;
  std::vector<std::vector<double>> loss_table;  // [w][z]
  double a = 0.0;
  double b = 1.0;

  std::size_t z_count() const { return z_pmf.size(); }

  std::size_t dataset_count() const {
    std::size_t c = 1;
    for (std::size_t i = 0; i < n; ++i) c *= z_count();
    return c;
  }

  std::size_t dataset_code(std::span<const std::size_t> s) const {
    std::size_t code = 0;
    for (auto z : s) code = code * z_count() + z;
    return code;
  }

  std::vector<std::size_t> dataset_from_code(std::size_t code) const {
    std::vector<std::size_t> s(n);
    for (std::size_t i = n; i-- > 0;) {
      s[i] = code % z_count();
      code /= z_count();
    }
    return s;
  }

  LossSpec<FiniteHypothesis, FiniteSample> loss() const { return table_loss(loss_table, a, b); }

  void validate() const {
    validate_pmf(z_pmf);
    if (n < 1) throw UsageError("problem needs N >= 1");
    if (w_count < 1) throw UsageError("problem needs at least one hypothesis");
    if (!(a < b)) throw UsageError("loss bounds require a < b");
    if (loss_table.size() != w_count) throw UsageError("loss table needs one row per hypothesis");
    for (const auto& row : loss_table) {
      if (row.size() != z_count()) throw UsageError("loss table row needs one entry per sample value");
      for (double v : row)
        if (!(v >= a && v <= b)) throw UsageError("loss table entry outside [a, b]");
    }
    if (algo_kernel.size() != dataset_count()) throw UsageError("kernel needs one row per dataset");
    for (const auto& row : algo_kernel) {
      if (row.size() != w_count) throw UsageError("kernel row needs one entry per hypothesis");
      try {
        validate_pmf(row);
      } catch (const DistributionError& e) {
        throw DistributionError(std::string("kernel row: ") + e.what());
      }
    }
  }
};

// P(w | s) proportional to exp(-beta * N * L_s(w)).
inline std::vector<std::vector<double>> gibbs_kernel(const std::vector<std::vector<double>>& loss_table,
                                                     std::size_t z_count, std::size_t n, double beta) {
  DiscreteProblem shape;
  shape.z_pmf.assign(z_count, 1.0 / static_cast<double>(z_count));
  shape.n = n;
  const std::size_t w_count = loss_table.size();
  std::vector<std::vector<double>> kernel(shape.dataset_count(), std::vector<double>(w_count));
  for (std::size_t code = 0; code < kernel.size(); ++code) {
    const auto s = shape.dataset_from_code(code);
    std::vector<double> energy(w_count, 0.0);
    for (std::size_t w = 0; w < w_count; ++w)
      for (auto z : s) energy[w] += beta * loss_table[w][z];
    const double lowest = *std::min_element(energy.begin(), energy.end());
    double norm = 0.0;
    for (std::size_t w = 0; w < w_count; ++w) norm += kernel[code][w] = std::exp(lowest - energy[w]);
    for (auto& p : kernel[code]) p /= norm;
  }
  return kernel;
}

inline DiscreteProblem gibbs_problem(std::vector<double> z_pmf, std::size_t n,
                                     std::vector<std::vector<double>> loss_table, double a, double b,
                                     double beta) {
  DiscreteProblem p;
  p.z_pmf = std::move(z_pmf);
  p.n = n;
  p.w_count = loss_table.size();
  p.algo_kernel = gibbs_kernel(loss_table, p.z_pmf.size(), n, beta);
  p.loss_table = std::move(loss_table);
  p.a = a;
  p.b = b;
  p.validate();
  return p;
}

// Z uniform on {0, 1}, N = 1, W = Z_1, l(w, z) = 1{w != z}.
inline DiscreteProblem memorizing_problem() {
  DiscreteProblem p;
  p.z_pmf = {0.5, 0.5};
  p.n = 1;
  p.w_count = 2;
  p.algo_kernel = {{1.0, 0.0}, {0.0, 1.0}};
  p.loss_table = {{0.0, 1.0}, {1.0, 0.0}};
  p.validate();
  return p;
}

// Variable names used in enumerated joints (1-based, as in reports).
inline std::string ztilde_var(std::size_t k) { return "Zt" + std::to_string(k + 1); }
inline std::string bit_var(std::size_t i) { return "U" + std::to_string(i + 1); }
inline std::string sample_var(std::size_t i) { return "Z" + std::to_string(i + 1); }
inline const std::string kHypothesisVar = "W";

// Joint over (Zt_1..Zt_2N, U_1..U_N, W) in the randomized subsample setting.
struct EnumeratedJoint {
  FiniteJoint joint;
  std::size_t n;
};

// Joint over (Z_1..Z_N, W) in the standard setting.
struct StandardJoint {
  FiniteJoint joint;
  std::size_t n;
};

namespace detail {

inline std::size_t checked_states(std::size_t base, std::size_t exponent, std::size_t extra) {
  double states = static_cast<double>(extra);
  for (std::size_t k = 0; k < exponent; ++k) states *= static_cast<double>(base);
  if (states > static_cast<double>(kMaxEnumeratedStates))
    throw EnumerationOverflow("enumerated joint would have " + std::to_string(states) + " states");
  return static_cast<std::size_t>(states);
}

}  // namespace detail

/// probs(zt, u, w) = prod_k pmf(zt_k) * 2^-N * kernel(w | compose(zt, u)).
inline EnumeratedJoint enumerate_joint(const DiscreteProblem& p) {
  p.validate();
  const std::size_t n = p.n, nz = p.z_count(), nw = p.w_count;
  const std::size_t bits = std::size_t{1} << n;
  const std::size_t states = detail::checked_states(nz, 2 * n, bits * nw);

  std::vector<Variable> vars;
  for (std::size_t k = 0; k < 2 * n; ++k) vars.push_back({ztilde_var(k), nz});
  for (std::size_t i = 0; i < n; ++i) vars.push_back({bit_var(i), 2});
  vars.push_back({kHypothesisVar, nw});

  std::vector<double> probs(states);
  std::vector<std::size_t> zt(2 * n), s(n);
  std::size_t flat = 0;
  const std::size_t zt_states = states / (bits * nw);
  const double bit_weight = 1.0 / static_cast<double>(bits);
  for (std::size_t zcode = 0; zcode < zt_states; ++zcode) {
    std::size_t rest = zcode;
    double pz = 1.0;
    for (std::size_t k = 2 * n; k-- > 0;) {
      zt[k] = rest % nz;
      rest /= nz;
    }
    for (auto z : zt) pz *= p.z_pmf[z];
    for (std::size_t ucode = 0; ucode < bits; ++ucode) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t bit = (ucode >> (n - 1 - i)) & 1;
        s[i] = zt[i + bit * n];
      }
      const auto& row = p.algo_kernel[p.dataset_code(s)];
      for (std::size_t w = 0; w < nw; ++w) probs[flat++] = pz * bit_weight * row[w];
    }
  }
  return {FiniteJoint(std::move(vars), std::move(probs), 1e-10), n};
}

inline StandardJoint enumerate_standard_joint(const DiscreteProblem& p) {
  p.validate();
  const std::size_t n = p.n, nz = p.z_count(), nw = p.w_count;
  const std::size_t states = detail::checked_states(nz, n, nw);
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < n; ++i) vars.push_back({sample_var(i), nz});
  vars.push_back({kHypothesisVar, nw});
  std::vector<double> probs(states);
  std::size_t flat = 0;
  for (std::size_t code = 0; code < p.dataset_count(); ++code) {
    const auto s = p.dataset_from_code(code);
    double ps = 1.0;
    for (auto z : s) ps *= p.z_pmf[z];
    for (std::size_t w = 0; w < nw; ++w) probs[flat++] = ps * p.algo_kernel[code][w];
  }
  return {FiniteJoint(std::move(vars), std::move(probs), 1e-10), n};
}

// ---------------------------------------------------------------------------
// Variable groups.

inline VarGroup ztilde_group(std::size_t n) {
  VarGroup g;
  for (std::size_t k = 0; k < 2 * n; ++k) g.push_back(ztilde_var(k));
  return g;
}

inline VarGroup bits_group(std::span<const std::size_t> indices) {
  VarGroup g;
  for (auto i : indices) g.push_back(bit_var(i));
  return g;
}

inline VarGroup samples_group(std::span<const std::size_t> indices) {
  VarGroup g;
  for (auto i : indices) g.push_back(sample_var(i));
  return g;
}

inline std::vector<std::size_t> complement(std::span<const std::size_t> subset, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (std::find(subset.begin(), subset.end(), i) == subset.end()) out.push_back(i);
  return out;
}

inline std::vector<std::size_t> range_indices(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

// Every M-subset of [N] in lexicographic order.
inline std::vector<SubsetIndex> all_subsets(std::size_t n, std::size_t m) {
  if (m < 1 || m > n) throw UsageError("subset size must be in [1, N]");
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(m), true);
  std::vector<SubsetIndex> out;
  do {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (mask[i]) idx.push_back(i);
    out.emplace_back(std::move(idx), n);
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return out;
}

/// For every state c of `full` with positive probability: its weight and
/// KL(P_{A|full=c} || P_{A|sub=c|sub}), where `sub` is a subset of `full`.
inline std::vector<ConditionalTerm> pointwise_posterior_kl(const FiniteJoint& joint, const VarGroup& a,
                                                          const VarGroup& full, const VarGroup& sub) {
  for (const auto& v : sub)
    if (std::find(full.begin(), full.end(), v) == full.end())
      throw UsageError("conditioning subset must be contained in the full conditioning set");
  VarGroup full_a = full, sub_a = sub;
  full_a.insert(full_a.end(), a.begin(), a.end());
  sub_a.insert(sub_a.end(), a.begin(), a.end());
  const FiniteJoint pf = joint.marginal(full_a);
  const FiniteJoint ps = joint.marginal(sub_a);
  std::size_t na = 1;
  for (const auto& v : a) na *= joint.vars()[joint.index_of(v)].size;

  std::vector<std::size_t> sub_pos;
  for (const auto& v : sub) sub_pos.push_back(pf.index_of(v));

  std::vector<ConditionalTerm> terms;
  std::vector<double> post_full(na), post_sub(na);
  std::vector<std::size_t> sub_coords(sub.size() + a.size(), 0);
  for (std::size_t c = 0; c < pf.state_count() / na; ++c) {
    const auto tab = pf.probs().subspan(c * na, na);
    double pc = 0.0;
    for (double v : tab) pc += v;
    if (pc == 0.0) continue;
    const auto coords = pf.decode(c * na);
    for (std::size_t k = 0; k < sub.size(); ++k) sub_coords[k] = coords[sub_pos[k]];
    const auto stab = ps.probs().subspan(ps.encode(sub_coords), na);
    double psc = 0.0;
    for (double v : stab) psc += v;
    for (std::size_t k = 0; k < na; ++k) {
      post_full[k] = tab[k] / pc;
      post_sub[k] = stab[k] / psc;
    }
    terms.push_back({pc, detail::kl_tables(post_full, post_sub)});
  }
  return terms;
}

namespace detail {

inline double expected_root(const std::vector<ConditionalTerm>& terms, double scale) {
  double total = 0.0;
  for (const auto& t : terms) total += t.weight * std::sqrt(scale * t.divergence);
  return total;
}

inline double weighted_divergence(const std::vector<ConditionalTerm>& terms) {
  double total = 0.0;
  for (const auto& t : terms) total += t.weight * t.divergence;
  return total;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Expected generalization error.

struct ExpectedGap {
  double gen = 0.0;      // E[gen(W, S)]
  double emp_gen = 0.0;  // E[emp_gen(W, Zt, U)]
};

inline ExpectedGap exact_expected_gap(const DiscreteProblem& p, const EnumeratedJoint& ej) {
  const auto loss = p.loss();
  const DataDistribution<FiniteSample> dist = finite_distribution(p.z_pmf);
  std::vector<double> pop(p.w_count);
  for (std::size_t w = 0; w < p.w_count; ++w) pop[w] = population_risk<FiniteHypothesis>(w, loss, dist);

  const std::size_t n = p.n;
  SuperSampleInstance<FiniteSample> ss;
  ss.ztilde.resize(2 * n);
  ss.u.resize(n);
  ExpectedGap gap;
  const auto probs = ej.joint.probs();
  for (std::size_t flat = 0; flat < probs.size(); ++flat) {
    if (probs[flat] == 0.0) continue;
    const auto coords = ej.joint.decode(flat);
    for (std::size_t k = 0; k < 2 * n; ++k) ss.ztilde[k] = coords[k];
    for (std::size_t i = 0; i < n; ++i) ss.u[i] = static_cast<std::uint8_t>(coords[2 * n + i]);
    const FiniteHypothesis w = coords[3 * n];
    const auto s = compose_dataset(ss);
    gap.gen += probs[flat] * (pop[w] - empirical_risk(w, loss, s));
    gap.emp_gen += probs[flat] * emp_gen_error(w, ss, loss);
  }
  return gap;
}

inline constexpr double kGapIdentityTolerance = 1e-12;

// E[gen]; throws std::logic_error if it disagrees with E[emp_gen] by more
// than 1e-12.
inline double exact_expected_gen(const DiscreteProblem& p) {
  const auto gap = exact_expected_gap(p, enumerate_joint(p));
  if (std::abs(gap.gen - gap.emp_gen) > kGapIdentityTolerance)
    throw std::logic_error("E[gen] and E[emp_gen] disagree");
  return gap.gen;
}

// ---------------------------------------------------------------------------
// Exact bounds.

// (1/N) sum_i sqrt(2 sigma^2 I(W; Z_i)), sigma = (b - a) / 2.
inline double exact_bound_prop1(const DiscreteProblem& p, const StandardJoint& sj) {
  const double sigma = (p.b - p.a) / 2.0;
  double total = 0.0;
  for (std::size_t i = 0; i < p.n; ++i)
    total += std::sqrt(2.0 * sigma * sigma *
                       mutual_information(sj.joint, {kHypothesisVar}, {sample_var(i)}));
  return total / static_cast<double>(p.n);
}

// (1/N) sum_i sqrt(2 (b - a)^2 I(W; U_i | Zt_i, Zt_{i+N})).
inline double exact_bound_prop3(const DiscreteProblem& p, const EnumeratedJoint& ej) {
  const double r = p.b - p.a;
  double total = 0.0;
  for (std::size_t i = 0; i < p.n; ++i)
    total += std::sqrt(2.0 * r * r *
                       conditional_mutual_information(ej.joint, {kHypothesisVar}, {bit_var(i)},
                                                      {ztilde_var(i), ztilde_var(i + p.n)}));
  return total / static_cast<double>(p.n);
}

/// E_{J, S_Jc}[ sqrt((2 sigma^2 / M) KL(P_{W,S_J|S_Jc} || P_{W|S_Jc} x P_{S_J})) ].
inline double exact_bound_prop2(const DiscreteProblem& p, const StandardJoint& sj, std::size_t m) {
  const double sigma = (p.b - p.a) / 2.0;
  const double scale = 2.0 * sigma * sigma / static_cast<double>(m);
  const auto subsets = all_subsets(p.n, m);
  double total = 0.0;
  for (const auto& j : subsets) {
    const auto rest = complement(j.indices(), p.n);
    total += detail::expected_root(
        conditional_kl_profile(sj.joint, {kHypothesisVar}, samples_group(j.indices()), samples_group(rest), true),
        scale);
  }
  return total / static_cast<double>(subsets.size());
}

/// E_{J, U_Jc, Zt}[ sqrt((2 (b - a)^2 / M) KL(P_{W,U_J|U_Jc,Zt} || P_{W|U_Jc,Zt} x P_{U_J})) ].
inline double exact_bound_prop4(const DiscreteProblem& p, const EnumeratedJoint& ej, std::size_t m) {
  const double r = p.b - p.a;
  const double scale = 2.0 * r * r / static_cast<double>(m);
  const auto subsets = all_subsets(p.n, m);
  double total = 0.0;
  for (const auto& j : subsets) {
    const auto rest = complement(j.indices(), p.n);
    VarGroup cond = bits_group(rest);
    const auto zt = ztilde_group(p.n);
    cond.insert(cond.end(), zt.begin(), zt.end());
    total += detail::expected_root(
        conditional_kl_profile(ej.joint, {kHypothesisVar}, bits_group(j.indices()), cond, true), scale);
  }
  return total / static_cast<double>(subsets.size());
}

// Prop-4 form with the inner expectation moved under the root (Jensen):
// E_J[ sqrt((2 (b - a)^2 / M) I(W; U_J | U_Jc, Zt)) ]. Never below exact_bound_prop4.
inline double exact_bound_prop4_mi_form(const DiscreteProblem& p, const EnumeratedJoint& ej, std::size_t m) {
  const double r = p.b - p.a;
  const double scale = 2.0 * r * r / static_cast<double>(m);
  const auto subsets = all_subsets(p.n, m);
  double total = 0.0;
  for (const auto& j : subsets) {
    const auto rest = complement(j.indices(), p.n);
    VarGroup cond = bits_group(rest);
    const auto zt = ztilde_group(p.n);
    cond.insert(cond.end(), zt.begin(), zt.end());
    total += std::sqrt(scale * detail::weighted_divergence(conditional_kl_profile(
                                   ej.joint, {kHypothesisVar}, bits_group(j.indices()), cond, true)));
  }
  return total / static_cast<double>(subsets.size());
}

/// Disintegrated comparison bound with every expectation outside the root:
/// ((b - a) / sqrt 2) E_{J,S}[ sqrt(KL(P_{W|S} || P_{W|S_Jc})) ].
/// Bounds E[gen] without absolute value.
inline double exact_bound_negrea25(const DiscreteProblem& p, const StandardJoint& sj, std::size_t m) {
  const auto subsets = all_subsets(p.n, m);
  const auto all = samples_group(range_indices(p.n));
  double total = 0.0;
  for (const auto& j : subsets)
    total += detail::expected_root(
        pointwise_posterior_kl(sj.joint, {kHypothesisVar}, all, samples_group(complement(j.indices(), p.n))),
        1.0);
  return (p.b - p.a) / std::sqrt(2.0) * total / static_cast<double>(subsets.size());
}

/// Randomized-subsample counterpart:
/// sqrt 2 (b - a) E_{J,Zt,U}[ sqrt(KL(P_{W|U,Zt} || P_{W|U_Jc,Zt})) ].
/// Bounds E[gen] without absolute value.
inline double exact_bound_prop5(const DiscreteProblem& p, const EnumeratedJoint& ej, std::size_t m) {
  const auto subsets = all_subsets(p.n, m);
  const auto zt = ztilde_group(p.n);
  VarGroup full = bits_group(range_indices(p.n));
  full.insert(full.end(), zt.begin(), zt.end());
  double total = 0.0;
  for (const auto& j : subsets) {
    VarGroup sub = bits_group(complement(j.indices(), p.n));
    sub.insert(sub.end(), zt.begin(), zt.end());
    total += detail::expected_root(pointwise_posterior_kl(ej.joint, {kHypothesisVar}, full, sub), 1.0);
  }
  return std::sqrt(2.0) * (p.b - p.a) * total / static_cast<double>(subsets.size());
}

// ---------------------------------------------------------------------------
// Ordering chains.

/// (sum_i I(W;U_i|Zt_i,Zt_{i+N}), sum_i I(W;U_i|Zt), I(W;U|Zt),
///  sum_i I(W;U_i|Zt,U^-i)); nondecreasing.
inline std::vector<double> ordering_chain_randomized(const DiscreteProblem& p, const EnumeratedJoint& ej) {
  const std::size_t n = p.n;
  const auto zt = ztilde_group(n);
  const VarGroup w = {kHypothesisVar};
  double pairwise = 0.0, marginal = 0.0, leave_one_out = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    pairwise += conditional_mutual_information(ej.joint, w, {bit_var(i)}, {ztilde_var(i), ztilde_var(i + n)});
    marginal += conditional_mutual_information(ej.joint, w, {bit_var(i)}, zt);
    const std::size_t only[] = {i};
    VarGroup cond = bits_group(complement(only, n));
    cond.insert(cond.end(), zt.begin(), zt.end());
    leave_one_out += conditional_mutual_information(ej.joint, w, {bit_var(i)}, cond);
  }
  const double joint_bits = conditional_mutual_information(ej.joint, w, bits_group(range_indices(n)), zt);
  return {pairwise, marginal, joint_bits, leave_one_out};
}

/// (sum_i I(W;Z_i), I(W;S), sum_i I(W;Z_i|S^-i)); nondecreasing.
inline std::vector<double> ordering_chain_standard(const DiscreteProblem& p, const StandardJoint& sj) {
  const std::size_t n = p.n;
  const VarGroup w = {kHypothesisVar};
  double individual = 0.0, leave_one_out = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    individual += mutual_information(sj.joint, w, {sample_var(i)});
    const std::size_t only[] = {i};
    const auto rest = complement(only, n);
    leave_one_out += rest.empty() ? mutual_information(sj.joint, w, {sample_var(i)})
                                  : conditional_mutual_information(sj.joint, w, {sample_var(i)}, samples_group(rest));
  }
  const double whole = mutual_information(sj.joint, w, samples_group(range_indices(n)));
  return {individual, whole, leave_one_out};
}

// ---------------------------------------------------------------------------
// Full report.

struct OracleSummary {
  std::size_t n = 0;
  ExpectedGap gap;
  double prop1 = 0.0;
  double prop3 = 0.0;
  std::vector<double> prop2;  // index m - 1
  std::vector<double> prop4;
  std::vector<double> prop4_mi_form;
  std::vector<double> negrea25;
  std::vector<double> prop5;
  std::vector<double> chain_randomized;
  std::vector<double> chain_standard;
};

inline OracleSummary summarize(const DiscreteProblem& p) {
  const auto ej = enumerate_joint(p);
  const auto sj = enumerate_standard_joint(p);
  OracleSummary s;
  s.n = p.n;
  s.gap = exact_expected_gap(p, ej);
  s.prop1 = exact_bound_prop1(p, sj);
  s.prop3 = exact_bound_prop3(p, ej);
  for (std::size_t m = 1; m <= p.n; ++m) {
    s.prop2.push_back(exact_bound_prop2(p, sj, m));
    s.prop4.push_back(exact_bound_prop4(p, ej, m));
    s.prop4_mi_form.push_back(exact_bound_prop4_mi_form(p, ej, m));
    s.negrea25.push_back(exact_bound_negrea25(p, sj, m));
    s.prop5.push_back(exact_bound_prop5(p, ej, m));
  }
  s.chain_randomized = ordering_chain_randomized(p, ej);
  s.chain_standard = ordering_chain_standard(p, sj);
  return s;
}

struct InvariantResult {
  std::string name;
  bool passed = false;
  double slack = 0.0;  // how far inside the inequality (negative = violated)
};

inline constexpr double kBoundSlack = 1e-9;

inline bool chain_nondecreasing(const std::vector<double>& chain, double tol, double* slack) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < chain.size(); ++k) worst = std::min(worst, chain[k] - chain[k - 1]);
  if (slack) *slack = worst;
  return worst >= -tol;
}

inline std::vector<InvariantResult> check_invariants(const OracleSummary& s) {
  std::vector<InvariantResult> out;
  auto add = [&out](std::string name, double slack, double tol) {
    out.push_back({std::move(name), slack >= -tol, slack});
  };
  const double abs_gen = std::abs(s.gap.gen);
  add("gap_identity", kGapIdentityTolerance - std::abs(s.gap.gen - s.gap.emp_gen), 0.0);
  add("prop1_valid", s.prop1 - abs_gen, kBoundSlack);
  add("prop3_valid", s.prop3 - abs_gen, kBoundSlack);
  for (std::size_t m = 1; m <= s.n; ++m) {
    const auto k = m - 1;
    const auto tag = "_m" + std::to_string(m);
    add("prop2_valid" + tag, s.prop2[k] - abs_gen, kBoundSlack);
    add("prop4_valid" + tag, s.prop4[k] - abs_gen, kBoundSlack);
    add("negrea25_valid" + tag, s.negrea25[k] - s.gap.gen, kBoundSlack);
    add("prop5_valid" + tag, s.prop5[k] - s.gap.gen, kBoundSlack);
    add("prop4_jensen" + tag, s.prop4_mi_form[k] - s.prop4[k], kBoundSlack);
  }
  add("prop3_tightest", s.prop4_mi_form[0] - s.prop3, kBoundSlack);
  add("negrea25_tighter_m1", s.prop2[0] - s.negrea25[0], kBoundSlack);
  add("prop5_tighter_m1", s.prop4[0] - s.prop5[0], kBoundSlack);
  double slack = 0.0;
  chain_nondecreasing(s.chain_randomized, 1e-9, &slack);
  add("chain_randomized", slack, 1e-9);
  chain_nondecreasing(s.chain_standard, 1e-9, &slack);
  add("chain_standard", slack, 1e-9);
  return out;
}

}  // namespace genbound

#endif  // GENBOUND_ORACLE_HPP
