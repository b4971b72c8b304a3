// Copyright 2026 The qbm Authors
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

#include "core/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "core/errors.hpp"

namespace qbm::quad {

QuadResult gauss_kronrod(const Integrand& f, double a, double b, double abs_tol,
                         double rel_tol, int max_depth) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  // Boost's tolerance is relative to the L1 norm; an absolute floor is folded
  // in from a first non-adaptive pass.
  double tol = rel_tol;
  if (abs_tol > 0.0) {
    const double l1 = std::fabs(Rule::integrate(f, a, b, 0, 0.0));
    tol = std::max(rel_tol, l1 > 0.0 ? abs_tol / l1 : 1.0);
  }
  tol = std::max(tol, std::numeric_limits<double>::epsilon());
  double err = 0.0, l1 = 0.0;
  out.value = Rule::integrate(f, a, b, static_cast<unsigned>(std::max(max_depth, 0)), tol, &err, &l1);
  out.error = err;
  out.converged = err <= std::max(tol * l1, abs_tol);
  return out;
}

SeriesLimit euler_accelerate(const double* terms, int count, double head) {
  if (count <= 0) return {head, 0.0};
  // Partial sums of the trailing block; averaging repeatedly damps the
  // alternating component geometrically.
  const int block = std::min(count, 24);
  std::vector<double> s(static_cast<std::size_t>(block));
  double partial = head;
  for (int i = 0; i < count - block; ++i) partial += terms[i];
  for (int i = 0; i < block; ++i) {
    partial += terms[count - block + i];
    s[static_cast<std::size_t>(i)] = partial;
  }
  double spread = 0.0;
  for (int len = block; len > 1; --len) {
    if (len == 2) spread = 0.5 * std::fabs(s[0] - s[1]);
    for (int i = 0; i + 1 < len; ++i) {
      const auto j = static_cast<std::size_t>(i);
      s[j] = 0.5 * (s[j] + s[j + 1]);
    }
  }
  return {s[0], spread};
}

OscillatoryResult integrate_cosine(const Integrand& f, double tau, double smooth_until,
                                   double rel_tol, int max_panels) {
  if (!(tau > 0.0)) throw DomainError("integrate_cosine: tau must be positive");
  const double half_period = std::numbers::pi / tau;
  auto integrand = [&](double w) { return f(w) * std::cos(w * tau); };

  // Panel edges: 0, then zeros of cos(w tau) at (k + 1/2) pi / tau.
  constexpr double kPanelRel = 1e-13;
  OscillatoryResult out;
  double edge = 0.5 * half_period;
  double head = gauss_kronrod(integrand, 0.0, edge, 0.0, kPanelRel).value;
  double scale = std::fabs(head);
  while (edge < smooth_until) {
    const double next = edge + half_period;
    const double p = gauss_kronrod(integrand, edge, next, 0.0, kPanelRel).value;
    head += p;
    scale = std::max(scale, std::fabs(p));
    edge = next;
    ++out.panels;
  }

  std::vector<double> tail;
  tail.reserve(256);
  double last = head;
  int stable = 0;
  for (int k = 0; k < max_panels; ++k) {
    const double next = edge + half_period;
    tail.push_back(gauss_kronrod(integrand, edge, next, 0.0, kPanelRel).value);
    edge = next;
    ++out.panels;
    if (tail.size() < 8) continue;
    const SeriesLimit lim = euler_accelerate(tail.data(), static_cast<int>(tail.size()), head);
    const double change = std::fabs(lim.value - last);
    last = lim.value;
    const double target = rel_tol * std::max(std::fabs(lim.value), 1e-3 * rel_tol * scale);
    out.value = lim.value;
    out.error = std::max(change, lim.error);
    if (out.error <= target) {
      if (++stable >= 3) {
        out.converged = true;
        return out;
      }
    } else {
      stable = 0;
    }
  }
  throw ConvergenceError("oscillatory quadrature did not reach the requested tolerance",
                         out.value, out.error);
}

}  // namespace qbm::quad
