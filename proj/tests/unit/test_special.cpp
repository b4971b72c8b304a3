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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "core/special.hpp"

namespace qbm::special {
namespace {

// 30-digit reference values of u coth(u) - 1.
struct Ref {
  double u;
  double value;
};
constexpr Ref kXcoth[] = {
    {1e-6, 3.333333333333111111e-13}, {1e-4, 3.333333331111111113e-9}, {1e-2, 3.333311111322749e-5},
    {0.5, 0.08197670686932642},       {1.0, 0.3130352854993313},
};

TEST(XCothX, MatchesHighPrecisionReference) {
  for (const auto& r : kXcoth) {
    EXPECT_NEAR(x_coth_x_minus_one(r.u), r.value, 1e-14 * r.value) << "u = " << r.u;
  }
}

TEST(XCothX, ContinuousAcrossSeriesSwitch) {
  const double below = x_coth_x_minus_one(std::nextafter(1.0, 0.0));
  const double above = x_coth_x_minus_one(1.0);
  EXPECT_NEAR(below, above, 2e-15 * above);
}

TEST(XCothX, ReducedFormLimit) {
  EXPECT_NEAR(x_coth_x_minus_one_over_x2(1e-8), 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(x_coth_x(0.0), 1.0);
  EXPECT_NEAR(x_coth_x(2.0), 2.0 / std::tanh(2.0), 1e-15);
}

TEST(XCothX, LargeArgumentIsLinear) {
  EXPECT_NEAR(x_coth_x_minus_one(50.0), 49.0, 1e-12);
}

TEST(ZetaEven, ClosedForms) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  EXPECT_DOUBLE_EQ(zeta_even(0), -0.5);
  EXPECT_NEAR(zeta_even(1), pi2 / 6.0, 1e-15);
  EXPECT_NEAR(zeta_even(2), pi2 * pi2 / 90.0, 1e-15);
  EXPECT_NEAR(zeta_even(5), 1.0009945751278181, 1e-15);
  EXPECT_NEAR(zeta_even(10), 1.0000009539620339, 1e-15);
}

TEST(ZetaEven, TendsToOneAndDecreases) {
  for (int m = 1; m < 80; ++m) EXPECT_GE(zeta_even(m), zeta_even(m + 1));
  EXPECT_DOUBLE_EQ(zeta_even(100), 1.0);
}

}  // namespace
}  // namespace qbm::special
