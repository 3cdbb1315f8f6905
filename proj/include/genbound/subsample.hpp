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

#ifndef GENBOUND_SUBSAMPLE_HPP
#define GENBOUND_SUBSAMPLE_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "genbound/core.hpp"

namespace genbound {

// Supersample of 2N samples plus N selection bits. Dataset entry i is
// ztilde[i + u[i] * N] (0-based); files and reports use 1-based indices.
template <class Z>
struct SuperSampleInstance {
  std::vector<Z> ztilde;
  std::vector<std::uint8_t> u;

  std::size_t n() const { return u.size(); }

  void validate() const {
    if (u.empty()) throw UsageError("supersample needs N >= 1");
    if (ztilde.size() != 2 * u.size())
      throw UsageError("supersample must hold exactly 2N samples");
    for (auto bit : u)
      if (bit > 1) throw UsageError("selection bits must be 0 or 1");
  }

  // Sample used for training at position i.
  const Z& selected(std::size_t i) const { return ztilde[i + u[i] * n()]; }
  // Its unused counterpart.
  const Z& held_out(std::size_t i) const { return ztilde[i + (1 - u[i]) * n()]; }

  SuperSampleInstance flipped() const {
    SuperSampleInstance out = *this;
    for (auto& bit : out.u) bit = static_cast<std::uint8_t>(1 - bit);
    return out;
  }
};

// Sorted, distinct, 0-based subset J of [N] with |J| = M.
class SubsetIndex {
 public:
  SubsetIndex(std::vector<std::size_t> indices, std::size_t n) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    if (indices_.empty() || indices_.size() > n) throw UsageError("subset size must be in [1, N]");
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
      throw UsageError("subset indices must be distinct");
    if (indices_.back() >= n) throw UsageError("subset index out of range");
  }

  static SubsetIndex full(std::size_t n) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return SubsetIndex(std::move(all), n);
  }

  std::span<const std::size_t> indices() const { return indices_; }
  std::size_t m() const { return indices_.size(); }

 private:
  std::vector<std::size_t> indices_;
};

inline std::vector<std::uint8_t> draw_selection_bits(std::size_t n, Rng& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<std::uint8_t> u(n);
  for (auto& bit : u) bit = coin(rng) ? 1 : 0;
  return u;
}

// Uniform M-subset of [N].
inline SubsetIndex draw_subset(std::size_t n, std::size_t m, Rng& rng) {
  if (m < 1 || m > n) throw UsageError("subset size must be in [1, N]");
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<std::size_t> picked;
  picked.reserve(m);
  std::sample(all.begin(), all.end(), std::back_inserter(picked), m, rng);
  return SubsetIndex(std::move(picked), n);
}

template <class Z>
std::vector<Z> compose_dataset(const SuperSampleInstance<Z>& ss) {
  ss.validate();
  std::vector<Z> s;
  s.reserve(ss.n());
  for (std::size_t i = 0; i < ss.n(); ++i) s.push_back(ss.selected(i));
  return s;
}

// gen(w, S) = L_P(w) - L_S(w).
template <class W, class Z>
double gen_error(const W& w, std::span<const Z> s, const LossSpec<W, Z>& loss,
                 const DataDistribution<Z>& dist) {
  return population_risk(w, loss, dist) - empirical_risk(w, loss, s);
}

template <class W, class Z>
double gen_error(const W& w, const std::vector<Z>& s, const LossSpec<W, Z>& loss,
                 const DataDistribution<Z>& dist) {
  return gen_error(w, std::span<const Z>(s), loss, dist);
}

// Empirical generalization error: mean over i of l(w, unused_i) - l(w, used_i).
template <class W, class Z>
double emp_gen_error(const W& w, const SuperSampleInstance<Z>& ss, const LossSpec<W, Z>& loss) {
  ss.validate();
  double sum = 0.0;
  for (std::size_t i = 0; i < ss.n(); ++i)
    sum += loss.eval(w, ss.held_out(i)) - loss.eval(w, ss.selected(i));
  return sum / static_cast<double>(ss.n());
}

// gen_J(w, S_J) = L_P(w) - (1/M) sum_{i in J} l(w, Z_i).
template <class W, class Z>
double gen_subset(const W& w, std::span<const Z> s, const SubsetIndex& subset,
                  const LossSpec<W, Z>& loss, const DataDistribution<Z>& dist) {
  double sum = 0.0;
  for (auto i : subset.indices()) {
    if (i >= s.size()) throw UsageError("subset index out of dataset range");
    sum += loss.eval(w, s[i]);
  }
  return population_risk(w, loss, dist) - sum / static_cast<double>(subset.m());
}

template <class W, class Z>
double gen_subset(const W& w, const std::vector<Z>& s, const SubsetIndex& subset,
                  const LossSpec<W, Z>& loss, const DataDistribution<Z>& dist) {
  return gen_subset(w, std::span<const Z>(s), subset, loss, dist);
}

template <class W, class Z>
double emp_gen_subset(const W& w, const SuperSampleInstance<Z>& ss, const SubsetIndex& subset,
                      const LossSpec<W, Z>& loss) {
  ss.validate();
  double sum = 0.0;
  for (auto i : subset.indices()) {
    if (i >= ss.n()) throw UsageError("subset index out of supersample range");
    sum += loss.eval(w, ss.held_out(i)) - loss.eval(w, ss.selected(i));
  }
  return sum / static_cast<double>(subset.m());
}

}  // namespace genbound

#endif  // GENBOUND_SUBSAMPLE_HPP
