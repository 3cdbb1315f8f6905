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

#ifndef GENBOUND_ERRORS_HPP
#define GENBOUND_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace genbound {

// Caller violated a documented precondition (empty data, overlapping
// variable groups, index out of range, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A probability table that does not normalize or has negative entries.
class DistributionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// KL(P||Q) requested with P not absolutely continuous w.r.t. Q.
class DivergenceUndefined : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class UnsupportedCase : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EnumerationOverflow : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Non-finite parameter produced by an SGLD step. `iteration` is 1-based.
class SgldDivergence : public std::runtime_error {
 public:
  explicit SgldDivergence(std::size_t iteration)
      : std::runtime_error("SGLD diverged at iteration " +
                           std::to_string(iteration)),
        iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

}  // namespace genbound

#endif  // GENBOUND_ERRORS_HPP
