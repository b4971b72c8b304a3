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

#include "core/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/zeta.hpp>

#include "core/errors.hpp"

namespace qbm::special {

namespace {

constexpr int kZetaCacheMax = 64;

struct ZetaTable {
  std::array<double, kZetaCacheMax + 1> v{};
  ZetaTable() {
    v[0] = -0.5;
    for (int m = 1; m <= kZetaCacheMax; ++m) v[m] = boost::math::zeta(2.0 * m);
  }
};

const ZetaTable& zeta_table() {
  static const ZetaTable table;
  return table;
}

}  // namespace

double x_coth_x_minus_one(double x) {
  x = std::fabs(x);
  if (x < 1.0) {
    // x coth x - 1 = 2 sum_{n>=1} (-1)^{n+1} zeta(2n) (x/pi)^{2n}; the direct
    // form below loses up to -log10(x^2/3) digits to cancellation.
    const auto& z = zeta_table().v;
    const double p = (x / std::numbers::pi) * (x / std::numbers::pi);
    double pw = p;
    double sum = 0.0;
    for (int n = 1; n <= kZetaCacheMax; ++n) {
      const double term = z[n] * pw;
      sum += (n % 2 == 1) ? term : -term;
      if (term < 1e-18 * sum) break;
      pw *= p;
    }
    return 2.0 * sum;
  }
  return x / std::tanh(x) - 1.0;
}

double x_coth_x(double x) { return 1.0 + x_coth_x_minus_one(x); }

double x_coth_x_minus_one_over_x2(double x) {
  x = std::fabs(x);
  if (x < 1e-2) {
    const double x2 = x * x;
    return 1.0 / 3.0 + x2 * (-1.0 / 45.0 + x2 * (2.0 / 945.0 - x2 / 4725.0));
  }
  return x_coth_x_minus_one(x) / (x * x);
}

double zeta_even(int m) {
  if (m < 0) throw DomainError("zeta_even: order must be non-negative");
  if (m > kZetaCacheMax) return 1.0;
  return zeta_table().v[static_cast<std::size_t>(m)];
}

}  // namespace qbm::special
