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

#ifndef GENBOUND_RNG_HPP
#define GENBOUND_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace genbound {

using Rng = std::mt19937_64;

// Named sub-streams of a master seed. Streams never share state, so e.g. the
// held-out population draw is disjoint from every training draw.
enum class Stream : std::uint64_t {
  kSupersample = 1,
  kSelection = 2,
  kBatches = 3,
  kInit = 4,
  kNoise = 5,
  kSubset = 6,
  kPopulation = 7,
  kGeneric = 8,
};

// Deterministic generator for (seed, stream, coordinates...). The coordinates
// are typically (outer replication, inner replication).
inline Rng make_rng(std::uint64_t seed, Stream stream,
                    std::initializer_list<std::uint64_t> coords = {}) {
  std::vector<std::uint32_t> words;
  auto push = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  push(static_cast<std::uint64_t>(stream));
  for (auto c : coords) push(c);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

// Derives a child 64-bit seed; used where an API takes a plain seed.
inline std::uint64_t derive_seed(std::uint64_t seed, Stream stream,
                                 std::initializer_list<std::uint64_t> coords = {}) {
  auto rng = make_rng(seed, stream, coords);
  return rng();
}

}  // namespace genbound

#endif  // GENBOUND_RNG_HPP
