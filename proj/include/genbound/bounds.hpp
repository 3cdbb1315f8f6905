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

#ifndef GENBOUND_BOUNDS_HPP
#define GENBOUND_BOUNDS_HPP

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "genbound/core.hpp"
#include "genbound/info.hpp"
#include "genbound/parallel.hpp"
#include "genbound/rng.hpp"
#include "genbound/sgld.hpp"
#include "genbound/subsample.hpp"

// Monte Carlo estimation of the SGLD generalization bounds. One outer draw is
// (Zt, U, V^T); for it, n_inner trajectories share the draw and differ only in
// initialization and Gaussian noise, which estimates the inner expectation
// over W^{t-1} given (U, Zt, V^{t-1}). The root is applied to the inner mean,
// and the outer mean is taken over the rooted values. J is enumerated over
// [N] when N <= kEnumerateIndexLimit and drawn uniformly otherwise.

namespace genbound {

inline constexpr std::size_t kEnumerateIndexLimit = 16;

struct SgldProblem {
  std::string name;
  std::size_t n = 1;
  Sampler<LabeledPoint> sampler;
  LossSpec<Vector, LabeledPoint> loss;
  std::vector<LabeledPoint> population;  // fixed held-out set for L_P
};

// Held-out population drawn from the kPopulation stream of `population_seed`,
// which training draws never use.
inline std::vector<LabeledPoint> draw_population(const Sampler<LabeledPoint>& sampler, std::size_t size,
                                                 std::uint64_t population_seed) {
  auto rng = make_rng(population_seed, Stream::kPopulation);
  return draw_samples(sampler, size, rng);
}

// 2D sigmoid-loss classification used as the reference SGLD problem.
inline SgldProblem classification_problem(std::size_t n, Vector center, double spread, double radius,
                                          std::size_t population_size, std::uint64_t population_seed) {
  SgldProblem p;
  p.name = "classification";
  p.n = n;
  p.sampler = gaussian_mixture_sampler(std::move(center), spread, radius);
  p.loss = sigmoid_loss(radius);
  p.population = draw_population(p.sampler, population_size, population_seed);
  return p;
}

inline SgldProblem mean_estimation_problem(std::size_t n, Vector mean, double spread, double width,
                                           std::size_t population_size, std::uint64_t population_seed) {
  SgldProblem p;
  p.name = "mean_estimation";
  p.n = n;
  p.sampler = gaussian_location_sampler(std::move(mean), spread);
  p.loss = gaussian_bump_loss(width);
  p.population = draw_population(p.sampler, population_size, population_seed);
  return p;
}

enum class PiSource {
  kLikelihoodRatio,  // posterior from the Y statistics
  kOracleBits,       // pi = U_J exactly; every bound collapses to 0
};

struct EstimatorSettings {
  std::size_t n_outer = 64;
  std::size_t n_inner = 8;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::size_t gap_every = 20;  // gen-gap checkpoints; T is always one
  PiSource pi_source = PiSource::kLikelihoodRatio;
  bool compute_bounds = true;
};

struct BoundReport {
  std::string name;
  double value = 0.0;
  double stderr = 0.0;
  std::size_t n_outer = 0;
  std::size_t n_inner = 0;
  std::uint64_t seed = 0;
  double gen_gap = 0.0;
  double gen_gap_stderr = 0.0;
};

struct MeanWithError {
  double value = 0.0;
  double stderr = 0.0;
};

// Per-iteration aggregates. Summand means pool every (outer draw, j in V_t)
// pair; cumulative bounds use the horizon t; gap columns are NaN away from
// the checkpoints.
struct IterationRow {
  std::size_t t = 0;
  double eta = 0.0;
  double sigma = 0.0;
  double mean_f = 0.0;
  double mean_g = 0.0;
  double mean_min = 0.0;
  double mean_sq_pi_error = 0.0;
  double bound_f = 0.0;
  double bound_g = 0.0;
  double bound_min = 0.0;
  double bound_lipschitz = 0.0;
  double bound_negrea31 = 0.0;
  double gen_gap = std::numeric_limits<double>::quiet_NaN();
  double gen_gap_stderr = std::numeric_limits<double>::quiet_NaN();
};

enum BoundKind : std::size_t { kBoundF = 0, kBoundG, kBoundMin, kBoundLipschitz, kBoundNegrea31, kBoundKinds };

inline const char* bound_name(std::size_t kind) {
  static const char* names[] = {"f", "g", "min", "lipschitz", "negrea31"};
  return names[kind];
}

struct BoundSuite {
  std::vector<BoundReport> reports;  // indexed by BoundKind; empty if bounds were skipped
  std::vector<IterationRow> rows;
  MeanWithError gen_gap;
  MeanWithError emp_gen_gap;
  std::size_t n_outer_used = 0;
  std::size_t n_diverged = 0;  // trajectories
  std::size_t n_trajectories = 0;

  const BoundReport& report(BoundKind kind) const { return reports.at(kind); }
};

namespace detail {

struct OuterResult {
  bool diverged = false;
  std::size_t diverged_trajectories = 0;
  // [t-1][kind] bound at horizon t for this draw
  std::vector<std::array<double, kBoundKinds>> horizon;
  // [t-1] pooled sums over j in V_t of inner-mean summands and their counts
  std::vector<std::array<double, 4>> summand_sums;  // f, g, min, sq_error
  std::vector<std::size_t> summand_counts;
  std::vector<double> gap_at;  // [checkpoint] inner-mean gen(theta_t, S)
  double emp_gap = 0.0;
};

inline MeanWithError mean_and_stderr(const std::vector<double>& xs) {
  MeanWithError out;
  if (xs.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.value = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return {out.value, std::numeric_limits<double>::quiet_NaN()};
  double ss = 0.0;
  for (double x : xs) ss += (x - out.value) * (x - out.value);
  out.stderr = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  return out;
}

inline std::vector<std::size_t> checkpoints(std::size_t t_max, std::size_t every) {
  std::vector<std::size_t> out;
  if (every > 0)
    for (std::size_t t = every; t < t_max; t += every) out.push_back(t);
  out.push_back(t_max);
  return out;
}

}  // namespace detail

inline void validate_bound_inputs(const SgldProblem& problem, const SgldConfig& cfg,
                                  const EstimatorSettings& settings) {
  validate_loss(problem.loss);
  validate_config(cfg, problem.n);
  if (settings.n_outer < 2) throw UsageError("need at least 2 outer replications");
  if (settings.n_inner < 1) throw UsageError("need at least 1 inner replication");
  if (problem.population.empty()) throw UsageError("held-out population set is empty");
  if (cfg.t_max < 1) throw UsageError("need at least one SGLD iteration");
  if (settings.compute_bounds)
    for (std::size_t t = 1; t <= cfg.t_max; ++t)
      if (!(cfg.sigma(t) > 0.0)) throw UsageError("bounds need sigma_t > 0 for every t");
}

/// Runs the shared-draw experiment and assembles every SGLD bound, the
/// per-iteration aggregates and the generalization-gap estimates.
inline BoundSuite run_bound_suite(const SgldProblem& problem, const SgldConfig& cfg,
                                  const EstimatorSettings& settings) {
  validate_bound_inputs(problem, cfg, settings);
  const std::size_t n = problem.n, t_max = cfg.t_max, k = cfg.batch_size;
  const auto& loss = problem.loss;
  const double range = loss.range();
  const bool have_l = loss.lipschitz.has_value();
  const double root2 = std::sqrt(2.0);
  const double negrea_prefactor =
      have_l ? *loss.lipschitz * range / (root2 * static_cast<double>(k)) : 0.0;
  const auto gap_ts = detail::checkpoints(t_max, settings.gap_every);

  std::vector<double> eta_over_sigma_sq(t_max);
  for (std::size_t t = 1; t <= t_max; ++t) {
    const double r = settings.compute_bounds ? cfg.eta(t) / cfg.sigma(t) : 0.0;
    eta_over_sigma_sq[t - 1] = r * r;
  }

  std::vector<detail::OuterResult> results(settings.n_outer);
  parallel_for(settings.n_outer, settings.workers, [&](std::size_t o) {
    auto& res = results[o];
    auto ss_rng = make_rng(settings.seed, Stream::kSupersample, {o});
    auto bit_rng = make_rng(settings.seed, Stream::kSelection, {o});
    SuperSampleInstance<LabeledPoint> ss;
    ss.ztilde = draw_samples(problem.sampler, 2 * n, ss_rng);
    ss.u = draw_selection_bits(n, bit_rng);
    const auto data = compose_dataset(ss);
    const auto batches = draw_batches(t_max, n, k, derive_seed(settings.seed, Stream::kBatches, {o}));

    std::vector<std::size_t> indices;
    if (n <= kEnumerateIndexLimit) {
      indices.resize(n);
      std::iota(indices.begin(), indices.end(), std::size_t{0});
    } else {
      auto j_rng = make_rng(settings.seed, Stream::kSubset, {o});
      indices.push_back(std::uniform_int_distribution<std::size_t>(0, n - 1)(j_rng));
    }
    const std::size_t nj = indices.size();

    // inner sums [j][t-1][f, g, min, sq_error, lipschitz]
    std::vector<std::vector<std::array<double, 5>>> inner(nj, std::vector<std::array<double, 5>>(t_max, {0, 0, 0, 0, 0}));
    std::vector<double> gap_sum(gap_ts.size(), 0.0);
    double emp_sum = 0.0;

    for (std::size_t r = 0; r < settings.n_inner; ++r) {
      SgldConfig run_cfg = cfg;
      run_cfg.theta0_seed = derive_seed(settings.seed, Stream::kInit, {o, r});
      run_cfg.noise_seed = derive_seed(settings.seed, Stream::kNoise, {o, r});
      Trajectory traj;
      try {
        traj = run_sgld_with_batches(run_cfg, data, loss, batches);
      } catch (const SgldDivergence&) {
        res.diverged = true;
        ++res.diverged_trajectories;
        continue;
      }
      if (res.diverged) continue;
      for (std::size_t c = 0; c < gap_ts.size(); ++c) {
        const Vector& theta = traj.thetas[gap_ts[c]];
        gap_sum[c] += empirical_risk(theta, loss, problem.population) - empirical_risk(theta, loss, data);
      }
      emp_sum += emp_gen_error(traj.thetas.back(), ss, loss);
      if (!settings.compute_bounds) continue;
      for (std::size_t jj = 0; jj < nj; ++jj) {
        const std::size_t j = indices[jj];
        for (const auto& s : trajectory_summands(traj, ss, j, loss)) {
          double f = s.f, g = s.g, sq = s.sq_error, lip = s.lipschitz;
          if (settings.pi_source == PiSource::kOracleBits) f = g = sq = lip = 0.0;
          auto& acc = inner[jj][s.t - 1];
          acc[0] += f;
          acc[1] += g;
          acc[2] += std::min(f, g);
          acc[3] += sq;
          acc[4] += lip;
        }
      }
    }
    if (res.diverged) return;

    const double inv_inner = 1.0 / static_cast<double>(settings.n_inner);
    res.gap_at.resize(gap_ts.size());
    for (std::size_t c = 0; c < gap_ts.size(); ++c) res.gap_at[c] = gap_sum[c] * inv_inner;
    res.emp_gap = emp_sum * inv_inner;
    if (!settings.compute_bounds) return;

    res.horizon.assign(t_max, {0, 0, 0, 0, 0});
    res.summand_sums.assign(t_max, {0, 0, 0, 0});
    res.summand_counts.assign(t_max, 0);
    const double inv_nj = 1.0 / static_cast<double>(nj);
    for (std::size_t jj = 0; jj < nj; ++jj) {
      const std::size_t j = indices[jj];
      double cum_f = 0, cum_g = 0, cum_min = 0, cum_lip = 0, cum_ratio = 0;
      for (std::size_t t = 1; t <= t_max; ++t) {
        if (std::binary_search(batches[t - 1].begin(), batches[t - 1].end(), j)) {
          const auto& acc = inner[jj][t - 1];
          const double mf = acc[0] * inv_inner, mg = acc[1] * inv_inner, mm = acc[2] * inv_inner;
          cum_f += mf;
          cum_g += mg;
          cum_min += mm;
          cum_lip += acc[4] * inv_inner;
          cum_ratio += eta_over_sigma_sq[t - 1];
          auto& sums = res.summand_sums[t - 1];
          sums[0] += mf;
          sums[1] += mg;
          sums[2] += mm;
          sums[3] += acc[3] * inv_inner;
          ++res.summand_counts[t - 1];
        }
        auto& h = res.horizon[t - 1];
        h[kBoundF] += root2 * range * std::sqrt(cum_f) * inv_nj;
        h[kBoundG] += root2 * range * std::sqrt(cum_g) * inv_nj;
        h[kBoundMin] += root2 * range * std::sqrt(cum_min) * inv_nj;
        h[kBoundLipschitz] += root2 * range * std::sqrt(cum_lip) * inv_nj;
        h[kBoundNegrea31] += negrea_prefactor * std::sqrt(cum_ratio) * inv_nj;
      }
    }
  });

  // Ordered reduction.
  BoundSuite suite;
  std::vector<std::size_t> used;
  for (std::size_t o = 0; o < results.size(); ++o) {
    suite.n_diverged += results[o].diverged_trajectories;
    if (!results[o].diverged) used.push_back(o);
  }
  suite.n_outer_used = used.size();
  suite.n_trajectories = settings.n_outer * settings.n_inner;

  std::vector<double> xs;
  auto collect = [&](auto getter) {
    xs.clear();
    for (auto o : used) xs.push_back(getter(results[o]));
    return detail::mean_and_stderr(xs);
  };

  std::vector<MeanWithError> gap_at(gap_ts.size());
  for (std::size_t c = 0; c < gap_ts.size(); ++c)
    gap_at[c] = collect([c](const detail::OuterResult& r) { return r.gap_at[c]; });
  suite.gen_gap = gap_at.back();
  suite.emp_gen_gap = collect([](const detail::OuterResult& r) { return r.emp_gap; });

  suite.rows.resize(t_max);
  for (std::size_t t = 1; t <= t_max; ++t) {
    auto& row = suite.rows[t - 1];
    row.t = t;
    row.eta = cfg.eta(t);
    row.sigma = cfg.sigma(t);
  }
  for (std::size_t c = 0; c < gap_ts.size(); ++c) {
    suite.rows[gap_ts[c] - 1].gen_gap = gap_at[c].value;
    suite.rows[gap_ts[c] - 1].gen_gap_stderr = gap_at[c].stderr;
  }
  if (!settings.compute_bounds) return suite;

  for (std::size_t t = 1; t <= t_max; ++t) {
    auto& row = suite.rows[t - 1];
    std::array<double, 4> pooled{0, 0, 0, 0};
    std::size_t count = 0;
    for (auto o : used) {
      for (std::size_t q = 0; q < 4; ++q) pooled[q] += results[o].summand_sums[t - 1][q];
      count += results[o].summand_counts[t - 1];
    }
    const double denom = count ? static_cast<double>(count) : std::numeric_limits<double>::quiet_NaN();
    row.mean_f = pooled[0] / denom;
    row.mean_g = pooled[1] / denom;
    row.mean_min = pooled[2] / denom;
    row.mean_sq_pi_error = pooled[3] / denom;
    double* cols[kBoundKinds] = {&row.bound_f, &row.bound_g, &row.bound_min, &row.bound_lipschitz,
                                 &row.bound_negrea31};
    for (std::size_t kind = 0; kind < kBoundKinds; ++kind)
      *cols[kind] = collect([t, kind](const detail::OuterResult& r) { return r.horizon[t - 1][kind]; }).value;
  }

  for (std::size_t kind = 0; kind < kBoundKinds; ++kind) {
    const auto m = collect([t_max, kind](const detail::OuterResult& r) { return r.horizon[t_max - 1][kind]; });
    BoundReport rep;
    rep.name = bound_name(kind);
    rep.value = m.value;
    rep.stderr = m.stderr;
    if ((kind == kBoundLipschitz || kind == kBoundNegrea31) && !have_l)
      rep.value = rep.stderr = std::numeric_limits<double>::quiet_NaN();
    rep.n_outer = used.size();
    rep.n_inner = settings.n_inner;
    rep.seed = settings.seed;
    rep.gen_gap = suite.gen_gap.value;
    rep.gen_gap_stderr = suite.gen_gap.stderr;
    suite.reports.push_back(rep);
  }
  return suite;
}

inline BoundReport estimate_bound_f(const SgldProblem& p, const SgldConfig& cfg, const EstimatorSettings& s) {
  return run_bound_suite(p, cfg, s).report(kBoundF);
}

inline BoundReport estimate_bound_g(const SgldProblem& p, const SgldConfig& cfg, const EstimatorSettings& s) {
  return run_bound_suite(p, cfg, s).report(kBoundG);
}

inline BoundReport estimate_bound_min(const SgldProblem& p, const SgldConfig& cfg, const EstimatorSettings& s) {
  return run_bound_suite(p, cfg, s).report(kBoundMin);
}

inline BoundReport estimate_bound_lipschitz(const SgldProblem& p, const SgldConfig& cfg,
                                            const EstimatorSettings& s) {
  if (!p.loss.lipschitz) throw UsageError("Lipschitz bound needs a Lipschitz constant");
  return run_bound_suite(p, cfg, s).report(kBoundLipschitz);
}

inline BoundReport estimate_bound_negrea31(const SgldProblem& p, const SgldConfig& cfg,
                                           const EstimatorSettings& s) {
  if (!p.loss.lipschitz) throw UsageError("comparison bound needs a Lipschitz constant");
  return run_bound_suite(p, cfg, s).report(kBoundNegrea31);
}

// E[gen(theta_T, S)] against the held-out population, with its standard error.
inline MeanWithError estimate_gen_gap(const SgldProblem& p, const SgldConfig& cfg, EstimatorSettings s) {
  s.compute_bounds = false;
  s.gap_every = 0;
  return run_bound_suite(p, cfg, s).gen_gap;
}

// ---------------------------------------------------------------------------
// f versus g as functions of c = r^2 / 2, r = eta ||zeta|| / (sigma K).

struct CrossoverPoint {
  double c = 0.0;
  double r = 0.0;
  double f = 0.0;
  double g = 0.0;
};

inline CrossoverPoint crossover_point(double c, double pi, int u) {
  const double err = static_cast<double>(u) - pi;
  return {c, std::sqrt(2.0 * c), c * err * err, mixture_gaussian_kl_bound(c, pi, u)};
}

inline std::vector<CrossoverPoint> crossover_scan(double pi, int u, double c_min, double c_max, std::size_t steps) {
  if (!(c_min >= 0.0) || !(c_max > c_min) || steps < 2) throw UsageError("bad crossover scan range");
  std::vector<CrossoverPoint> out;
  out.reserve(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    const double c = c_min + (c_max - c_min) * static_cast<double>(s) / static_cast<double>(steps - 1);
    out.push_back(crossover_point(c, pi, u));
  }
  return out;
}

/// The c > 0 at which f = g, or nullopt when the curves never cross
/// (pi = u or |u - pi| = 1). Below the root f < g; above it g < f.
inline std::optional<double> crossover_root(double pi, int u) {
  const double err = std::abs(static_cast<double>(u) - pi);
  if (err == 0.0 || err >= 1.0) return std::nullopt;
  auto h = [pi, u](double c) {
    const auto p = crossover_point(c, pi, u);
    return p.f - p.g;
  };
  double lo = 1e-6, hi = 1.0;
  if (!(h(lo) < 0.0)) return std::nullopt;
  while (h(hi) <= 0.0) {
    hi *= 2.0;
    if (hi > 1e12) return std::nullopt;
  }
  std::uintmax_t iters = 200;
  const auto bracket = boost::math::tools::toms748_solve(h, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (bracket.first + bracket.second);
}

}  // namespace genbound

#endif  // GENBOUND_BOUNDS_HPP
