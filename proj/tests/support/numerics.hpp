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

#ifndef GENBOUND_TESTS_NUMERICS_HPP
#define GENBOUND_TESTS_NUMERICS_HPP

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace genbound::testing {

namespace detail {

inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                           double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                               int max_depth = 50) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

inline double normal_log_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
}

// KL(N(mu, s^2) || N(mu2, s2^2)) by quadrature over mu +- 10 s.
inline double gaussian_kl_quadrature(double mu, double s, double mu2, double s2, double tol = 1e-9) {
  auto integrand = [&](double x) {
    const double lp = normal_log_pdf(x, mu, s);
    return std::exp(lp) * (lp - normal_log_pdf(x, mu2, s2));
  };
  return adaptive_simpson(integrand, mu - 10.0 * s, mu + 10.0 * s, tol);
}

// Plain double loop, independent of the library's table code.
inline double reference_kl(const std::vector<double>& p, const std::vector<double>& q) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) total += p[i] * (std::log(p[i]) - std::log(q[i]));
  return total;
}

inline double reference_mi(const std::vector<std::vector<double>>& pxy) {
  std::vector<double> px(pxy.size(), 0.0), py(pxy.at(0).size(), 0.0);
  for (std::size_t i = 0; i < pxy.size(); ++i)
    for (std::size_t j = 0; j < py.size(); ++j) {
      px[i] += pxy[i][j];
      py[j] += pxy[i][j];
    }
  double total = 0.0;
  for (std::size_t i = 0; i < pxy.size(); ++i)
    for (std::size_t j = 0; j < py.size(); ++j)
      if (pxy[i][j] > 0.0) total += pxy[i][j] * std::log(pxy[i][j] / (px[i] * py[j]));
  return total;
}

}  // namespace genbound::testing

#endif  // GENBOUND_TESTS_NUMERICS_HPP
