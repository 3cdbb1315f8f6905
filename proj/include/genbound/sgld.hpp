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

#ifndef GENBOUND_SGLD_HPP
#define GENBOUND_SGLD_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <iterator>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "genbound/core.hpp"
#include "genbound/format.hpp"
#include "genbound/info.hpp"
#include "genbound/subsample.hpp"

namespace genbound {

using Schedule = std::function<double(std::size_t)>;  // t (1-based) -> value

inline Schedule constant_schedule(double value) {
  return [value](std::size_t) { return value; };
}

// value0 / ceil(t / every).
inline Schedule step_decay_schedule(double value0, std::size_t every) {
  if (every == 0) throw UsageError("decay period must be >= 1");
  return [value0, every](std::size_t t) {
    return value0 / static_cast<double>((t + every - 1) / every);
  };
}

struct SgldConfig {
  std::size_t t_max = 1;
  std::size_t batch_size = 1;
  std::size_t dim = 1;
  Schedule eta = constant_schedule(0.0);
  Schedule sigma = constant_schedule(0.0);
  double theta0_scale = 1.0;  // theta_0 ~ N(0, theta0_scale^2 I)
  std::uint64_t theta0_seed = 0;
  std::uint64_t noise_seed = 0;
  std::uint64_t batch_seed = 0;
};

// Record of one run. Vectors indexed by t - 1 hold the quantities of step t;
// thetas[t] is theta_t.
struct Trajectory {
  std::vector<Vector> thetas;
  std::vector<std::vector<std::size_t>> batches;  // sorted, 0-based into [N]
  std::vector<Vector> noises;
  std::vector<std::vector<Vector>> batch_grads;  // per-sample gradients at theta_{t-1}, batch order
  std::vector<double> etas;
  std::vector<double> sigmas;

  std::size_t steps() const { return batches.size(); }

  bool in_batch(std::size_t j, std::size_t t) const {
    const auto& v = batches.at(t - 1);
    return std::binary_search(v.begin(), v.end(), j);
  }
};

// V_1..V_T: uniform K-subsets of [N] without replacement within a batch,
// independent across iterations.
inline std::vector<std::vector<std::size_t>> draw_batches(std::size_t t_max, std::size_t n,
                                                          std::size_t k, std::uint64_t seed) {
  if (k < 1 || k > n) throw UsageError("batch size must be in [1, N]");
  auto rng = make_rng(seed, Stream::kBatches);
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> out(t_max);
  for (auto& batch : out) {
    batch.reserve(k);
    std::sample(all.begin(), all.end(), std::back_inserter(batch), k, rng);
  }
  return out;
}

inline void validate_config(const SgldConfig& cfg, std::size_t n) {
  if (cfg.dim < 1) throw UsageError("parameter dimension must be >= 1");
  if (cfg.batch_size < 1 || cfg.batch_size > n) throw UsageError("batch size must be in [1, N]");
  if (!(cfg.theta0_scale >= 0.0)) throw UsageError("theta0 scale must be non-negative");
  for (std::size_t t = 1; t <= cfg.t_max; ++t) {
    const double eta = cfg.eta(t), sigma = cfg.sigma(t);
    if (!(eta >= 0.0) || !std::isfinite(eta) || !(sigma >= 0.0) || !std::isfinite(sigma))
      throw UsageError("schedules must be finite and non-negative at t = " + std::to_string(t));
  }
}

/// theta_t = theta_{t-1} - eta_t grad L_{S_{V_t}}(theta_{t-1}) + sigma_t eps_t,
/// with the batches given. Throws SgldDivergence on the first non-finite
/// parameter.
inline Trajectory run_sgld_with_batches(const SgldConfig& cfg, std::span<const LabeledPoint> data,
                                        const LossSpec<Vector, LabeledPoint>& loss,
                                        std::vector<std::vector<std::size_t>> batches) {
  validate_config(cfg, data.size());
  if (batches.size() != cfg.t_max) throw UsageError("need one batch per iteration");
  const std::size_t d = cfg.dim;

  Trajectory traj;
  traj.thetas.reserve(cfg.t_max + 1);
  traj.noises.reserve(cfg.t_max);
  traj.batch_grads.reserve(cfg.t_max);

  auto init_rng = make_rng(cfg.theta0_seed, Stream::kInit);
  std::normal_distribution<double> init(0.0, 1.0);
  Vector theta(d);
  for (auto& v : theta) v = cfg.theta0_scale * init(init_rng);
  traj.thetas.push_back(theta);

  auto noise_rng = make_rng(cfg.noise_seed, Stream::kNoise);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector mean_grad(d);
  for (std::size_t t = 1; t <= cfg.t_max; ++t) {
    auto& batch = batches[t - 1];
    std::sort(batch.begin(), batch.end());
    if (batch.size() != cfg.batch_size) throw UsageError("batch has the wrong size");
    const double eta = cfg.eta(t), sigma = cfg.sigma(t);

    std::vector<Vector> grads;
    grads.reserve(batch.size());
    std::fill(mean_grad.begin(), mean_grad.end(), 0.0);
    for (auto i : batch) {
      if (i >= data.size()) throw UsageError("batch index out of range");
      grads.push_back(loss.grad(theta, data[i]));
      for (std::size_t k = 0; k < d; ++k) mean_grad[k] += grads.back()[k];
    }
    const double inv_k = 1.0 / static_cast<double>(batch.size());
    Vector eps(d);
    for (auto& e : eps) e = gauss(noise_rng);
    for (std::size_t k = 0; k < d; ++k) theta[k] = theta[k] - eta * (mean_grad[k] * inv_k) + sigma * eps[k];
    if (!all_finite(theta)) throw SgldDivergence(t);

    traj.thetas.push_back(theta);
    traj.noises.push_back(std::move(eps));
    traj.batch_grads.push_back(std::move(grads));
    traj.etas.push_back(eta);
    traj.sigmas.push_back(sigma);
  }
  traj.batches = std::move(batches);
  return traj;
}

inline Trajectory run_sgld(const SgldConfig& cfg, std::span<const LabeledPoint> data,
                           const LossSpec<Vector, LabeledPoint>& loss) {
  return run_sgld_with_batches(cfg, data, loss,
                               draw_batches(cfg.t_max, data.size(), cfg.batch_size, cfg.batch_seed));
}

inline Trajectory run_sgld(const SgldConfig& cfg, const std::vector<LabeledPoint>& data,
                           const LossSpec<Vector, LabeledPoint>& loss) {
  return run_sgld(cfg, std::span<const LabeledPoint>(data), loss);
}

namespace detail {

inline void check_step(const Trajectory& traj, std::size_t t) {
  if (t < 1 || t > traj.steps()) throw UsageError("iteration out of range");
}

}  // namespace detail

// zeta_{j,t} = grad l(theta_{t-1}, Zt_j) - grad l(theta_{t-1}, Zt_{j+N}).
inline Vector incoherence(const Trajectory& traj, const SuperSampleInstance<LabeledPoint>& ss,
                          std::size_t j, std::size_t t, const LossSpec<Vector, LabeledPoint>& loss) {
  detail::check_step(traj, t);
  if (j >= ss.n()) throw UsageError("sample index out of range");
  const Vector& theta = traj.thetas[t - 1];
  Vector zeta = loss.grad(theta, ss.ztilde[j]);
  const Vector other = loss.grad(theta, ss.ztilde[j + ss.n()]);
  for (std::size_t k = 0; k < zeta.size(); ++k) zeta[k] -= other[k];
  return zeta;
}

/// Y_{j,t,u} = ||theta_t - theta_{t-1} + (eta_t / K)(grad l(theta_{t-1}, Zt_{j+uN})
///             + sum_{i in V_t \ j} grad l(theta_{t-1}, Z_i))||^2 / (2 sigma_t^2).
///
/// The negative log-likelihood of step t under the hypothesis U_j = u, up to
/// a constant shared by both hypotheses. Requires j in V_t and sigma_t > 0.
inline double y_statistic(const Trajectory& traj, const SuperSampleInstance<LabeledPoint>& ss,
                          std::size_t j, std::size_t t, int u, const LossSpec<Vector, LabeledPoint>& loss) {
  detail::check_step(traj, t);
  if (u != 0 && u != 1) throw UsageError("hypothesis bit must be 0 or 1");
  const auto& batch = traj.batches[t - 1];
  const auto pos = std::lower_bound(batch.begin(), batch.end(), j);
  if (pos == batch.end() || *pos != j) throw UsageError("sample index not in the batch of this iteration");
  const double sigma = traj.sigmas[t - 1];
  if (!(sigma > 0.0)) throw UsageError("Y statistic needs sigma_t > 0");

  const Vector& prev = traj.thetas[t - 1];
  const Vector& next = traj.thetas[t];
  Vector acc = loss.grad(prev, ss.ztilde[j + static_cast<std::size_t>(u) * ss.n()]);
  const auto& grads = traj.batch_grads[t - 1];
  for (std::size_t b = 0; b < batch.size(); ++b) {
    if (batch[b] == j) continue;
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += grads[b][k];
  }
  const double step = traj.etas[t - 1] / static_cast<double>(batch.size());
  double norm2 = 0.0;
  for (std::size_t k = 0; k < acc.size(); ++k) {
    const double r = next[k] - prev[k] + step * acc[k];
    norm2 += r * r;
  }
  return norm2 / (2.0 * sigma * sigma);
}

// Running log-likelihood ratio log P(U_j = 1 | history) / P(U_j = 0 | history).
struct EstimatorState {
  double log_odds = 0.0;
};

// Logistic link; with equal priors on U_j this is the exact posterior.
inline double pi_estimate(const EstimatorState& state) {
  const double l = state.log_odds;
  if (l >= 0.0) return 1.0 / (1.0 + std::exp(-l));
  const double e = std::exp(l);
  return e / (1.0 + e);
}

// c = eta_t^2 ||zeta||^2 / (2 sigma_t^2 K^2): the KL between the two
// candidate Gaussian steps.
inline double step_divergence(double eta, double sigma, std::size_t k, double zeta_sq) {
  const double kk = static_cast<double>(k);
  return (eta * eta * zeta_sq) / (2.0 * sigma * sigma * kk * kk);
}

namespace detail {

inline double summand_c(const Trajectory& traj, const SuperSampleInstance<LabeledPoint>& ss, std::size_t j,
                        std::size_t t, const LossSpec<Vector, LabeledPoint>& loss) {
  if (!traj.in_batch(j, t)) throw UsageError("sample index not in the batch of this iteration");
  const double sigma = traj.sigmas[t - 1];
  if (!(sigma > 0.0)) throw UsageError("bound summands need sigma_t > 0");
  return step_divergence(traj.etas[t - 1], sigma, traj.batches[t - 1].size(),
                         squared_norm(incoherence(traj, ss, j, t, loss)));
}

}  // namespace detail

// f_{j,t} = c (U_j - pi)^2.
inline double per_iter_f(const Trajectory& traj, const SuperSampleInstance<LabeledPoint>& ss, std::size_t j,
                         std::size_t t, double pi, const LossSpec<Vector, LabeledPoint>& loss) {
  const double err = static_cast<double>(ss.u.at(j)) - pi;
  return detail::summand_c(traj, ss, j, t, loss) * (err * err);
}

// g_{j,t} = -log(|U_j - pi| e^{-c} + |(1 - pi) - U_j|).
inline double per_iter_g(const Trajectory& traj, const SuperSampleInstance<LabeledPoint>& ss, std::size_t j,
                         std::size_t t, double pi, const LossSpec<Vector, LabeledPoint>& loss) {
  return mixture_gaussian_kl_bound(detail::summand_c(traj, ss, j, t, loss), pi, ss.u.at(j));
}

// One t in T_j(V^T) for a fixed trajectory and index j.
struct Summand {
  std::size_t t = 0;
  double c = 0.0;         // eta^2 ||zeta||^2 / (2 sigma^2 K^2)
  double pi = 0.5;        // estimate of P(U_j = 1) from iterations before t
  double sq_error = 0.0;  // (U_j - pi)^2
  double f = 0.0;
  double g = 0.0;
  double lipschitz = 0.0;  // f with ||zeta|| replaced by 2L (0 when L unset)
};

/// Walks the trajectory once and returns every summand of index j. pi at
/// step t uses the likelihood ratios of the iterations s < t only.
inline std::vector<Summand> trajectory_summands(const Trajectory& traj,
                                                const SuperSampleInstance<LabeledPoint>& ss, std::size_t j,
                                                const LossSpec<Vector, LabeledPoint>& loss) {
  std::vector<Summand> out;
  EstimatorState state;
  const int bit = ss.u.at(j);
  const double two_l = loss.lipschitz ? 2.0 * *loss.lipschitz : 0.0;
  for (std::size_t t = 1; t <= traj.steps(); ++t) {
    if (!traj.in_batch(j, t)) continue;
    Summand s;
    s.t = t;
    s.pi = pi_estimate(state);
    const double err = static_cast<double>(bit) - s.pi;
    s.sq_error = err * err;
    s.c = detail::summand_c(traj, ss, j, t, loss);
    s.f = s.c * s.sq_error;
    s.g = mixture_gaussian_kl_bound(s.c, s.pi, bit);
    s.lipschitz = step_divergence(traj.etas[t - 1], traj.sigmas[t - 1], traj.batches[t - 1].size(),
                                  two_l * two_l) * s.sq_error;
    out.push_back(s);
    state.log_odds += y_statistic(traj, ss, j, t, 0, loss) - y_statistic(traj, ss, j, t, 1, loss);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Line-oriented text form:
//   # genbound-trajectory v1 dim=<d> steps=<T>
//   0 <theta_0 coords>
//   t <theta_t coords> : <1-based batch indices>

inline void write_trajectory(std::ostream& os, const Trajectory& traj) {
  const std::size_t d = traj.thetas.empty() ? 0 : traj.thetas.front().size();
  os << "# genbound-trajectory v1 dim=" << d << " steps=" << traj.steps() << '\n';
  for (std::size_t t = 0; t < traj.thetas.size(); ++t) {
    os << t;
    for (double v : traj.thetas[t]) os << ' ' << format_double(v);
    if (t > 0) {
      os << " :";
      for (auto i : traj.batches[t - 1]) os << ' ' << i + 1;
    }
    os << '\n';
  }
}

// Reads thetas and batches back; noises and gradients are not serialized.
inline Trajectory read_trajectory(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# genbound-trajectory v1", 0) != 0)
    throw UsageError("not a genbound trajectory file");
  Trajectory traj;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string tok;
    row >> tok;
    const auto t = parse_u64(tok);
    if (!t || *t != traj.thetas.size()) throw UsageError("trajectory lines out of order");
    Vector theta;
    std::vector<std::size_t> batch;
    bool after_colon = false;
    while (row >> tok) {
      if (tok == ":") {
        after_colon = true;
        continue;
      }
      if (after_colon) {
        const auto i = parse_u64(tok);
        if (!i || *i == 0) throw UsageError("bad batch index '" + tok + "'");
        batch.push_back(static_cast<std::size_t>(*i - 1));
      } else {
        const auto v = parse_double(tok);
        if (!v) throw UsageError("bad coordinate '" + tok + "'");
        theta.push_back(*v);
      }
    }
    traj.thetas.push_back(std::move(theta));
    if (*t > 0) traj.batches.push_back(std::move(batch));
  }
  return traj;
}

}  // namespace genbound

#endif  // GENBOUND_SGLD_HPP
