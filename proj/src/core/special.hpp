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

namespace qbm::special {

/// x*coth(x) - 1 for x > 0, with a Bernoulli-series branch below 1e-2 where
/// the direct form loses all significant digits.
double x_coth_x_minus_one(double x);

/// x*coth(x); finite limit 1 at x = 0.
double x_coth_x(double x);

/// (x*coth(x) - 1) / x^2, limit 1/3 at x = 0.
double x_coth_x_minus_one_over_x2(double x);

/// Riemann zeta at even argument 2m, m >= 0, with zeta(0) = -1/2.
/// Values for m <= 64 are computed once (alternating-series acceleration of
/// the Dirichlet eta function) and cached; beyond that zeta(2m) == 1 in
/// double precision.
double zeta_even(int m);

}  // namespace qbm::special
