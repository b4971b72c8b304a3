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

#pragma once

#include <functional>

namespace qbm::quad {

using Integrand = std::function<double(double)>;

struct QuadResult {
  double value{0.0};
  double error{0.0};
  bool converged{false};
};

/// Adaptive 7/15-point Gauss-Kronrod on [a, b] (Boost.Math). Stops when the
/// Kronrod-Gauss difference is below max(abs_tol, rel_tol * L1 norm).
QuadResult gauss_kronrod(const Integrand& f, double a, double b, double abs_tol,
                         double rel_tol, int max_depth = 30);

/// Result of an oscillatory half-line integral.
struct OscillatoryResult {
  double value{0.0};
  double error{0.0};
  int panels{0};
  bool converged{false};
};

/// Integral over [0, inf) of f(w) cos(w*tau) for an amplitude f that decays
/// slowly (possibly only like 1/w). The range is cut at the zeros of
/// cos(w*tau); panels up to `smooth_until` are summed directly, the rest form
/// an alternating series whose sum is accelerated by the Euler transform
/// (repeated averaging of partial sums).
///
/// Throws ConvergenceError carrying the achieved estimate when `rel_tol` is
/// not met within `max_panels` tail panels.
OscillatoryResult integrate_cosine(const Integrand& f, double tau, double smooth_until,
                                   double rel_tol, int max_panels = 4000);

/// Limit of an alternating series from its terms via the Euler transform
/// (repeated pairwise averaging of the trailing partial sums). Returns the
/// accelerated sum and an error estimate from the last two levels.
struct SeriesLimit {
  double value{0.0};
  double error{0.0};
};
SeriesLimit euler_accelerate(const double* terms, int count, double head = 0.0);

}  // namespace qbm::quad
