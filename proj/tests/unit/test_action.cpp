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

#include "core/action.hpp"
#include "core/bath.hpp"
#include "core/errors.hpp"
#include "core/special.hpp"

namespace qbm::action {
namespace {

// gamma/omega_c = 0.05 throughout
BathSpec at_chi(double chi) { return BathSpec::from_chi(chi, 20.0, {}); }

TEST(ZetaPartialSum, HighPrecisionReference) {
  EXPECT_NEAR(zeta_partial_sum(3, 1.0), -0.32116402116402116, 1e-15);
  EXPECT_NEAR(zeta_partial_sum(5, 2.5), 1.4974502694771792, 1e-13);
  EXPECT_DOUBLE_EQ(zeta_partial_sum(0, 1.0), -0.5);
}

TEST(ResummedBracket, HighPrecisionReference) {
  const struct {
    double chi, value;
  } refs[] = {{0.5, -0.0022859604455915758},
              {1.0, -0.0016626489002444265},
              {2.0, 0.00082904062383936261},
              {3.0, 0.0049763332199748436}};
  for (const auto& r : refs) EXPECT_NEAR(resummed_bracket(at_chi(r.chi)), r.value, 1e-15) << r.chi;
}

TEST(ResummationCheck, ConvergesToClosedForm) {
  for (double chi : {0.5, 1.0, 2.0, 3.0}) {
    const auto r = resummation_check(at_chi(chi));
    ASSERT_TRUE(r.passed()) << "chi = " << chi;
    EXPECT_LE(std::abs(r.partial_sums.back() - r.bracket), 1e-8 * std::abs(r.bracket));
  }
}

TEST(ResummationCheck, DomainErrorBeyondPi) {
  EXPECT_THROW(resummation_check(at_chi(3.2)), DomainError);
  // gamma >= omega_c
  EXPECT_THROW(resummation_check(BathSpec::from_chi(0.5, 0.8, {})), DomainError);
}

TEST(ResummedBracket, SignFollowsXVersusRatioSquared) {
  // bracket < 0 exactly when u coth u - 1 < (gamma/wc)^2
  for (double chi : {0.2, 1.0, 1.7, 1.8, 2.5}) {
    const auto b = at_chi(chi);
    const double r2 = 0.05 * 0.05;
    const double x = special::x_coth_x_minus_one(b.u());
    EXPECT_EQ(resummed_bracket(b) < 0.0, x < r2) << chi;
  }
}

TEST(EffectiveAction, Coefficients) {
  const auto b = at_chi(1.0);
  const auto a = effective_action(b);
  EXPECT_NEAR(a.coeff_qminus_sq, 2.0 * b.kT(), 1e-13);
  EXPECT_NEAR(a.alpha, special::x_coth_x_minus_one(b.u()), 1e-15);
  EXPECT_TRUE(a.gamma_small);
  EXPECT_TRUE(a.chi_below_pi);
  EXPECT_FALSE(effective_action(at_chi(4.0)).chi_below_pi);
}

TEST(EffectiveAlpha, SmoothAcrossTaylorBranch) {
  // u = 1e-4 is where the Taylor branch takes over
  const auto lo = BathSpec::from_theta(1.0 / (2.0 * 0.99999e-4), 20.0, {});
  const auto hi = BathSpec::from_theta(1.0 / (2.0 * 1.00001e-4), 20.0, {});
  const double a = effective_alpha(lo) / (lo.u() * lo.u());
  const double c = effective_alpha(hi) / (hi.u() * hi.u());
  EXPECT_NEAR(a, c, 1e-12);
  EXPECT_NEAR(a, 1.0 / 3.0, 1e-8);
}

TEST(SigmaI, TemperatureIndependent) {
  const auto c1 = sigma_i_coefficient(at_chi(0.5));
  const auto c2 = sigma_i_coefficient(at_chi(2.0));
  EXPECT_DOUBLE_EQ(c1.real(), 0.0);
  EXPECT_DOUBLE_EQ(c1.imag(), -1.0);
  EXPECT_EQ(c1, c2);
  EXPECT_EQ(sigma_i(2.0, 3.0, at_chi(1.0)), std::complex<double>(0.0, -6.0));
}

TEST(SigmaR, ClosedFormAssembly) {
  const auto b = at_chi(1.0);
  const double pref = -b.M() * b.gamma() * b.omega_c() / (b.hbar() * b.chi());
  const double expect = pref * (0.3 * 0.3 + (2.0 * 2.0) * resummed_bracket(b));
  EXPECT_NEAR(sigma_r_closed_form(0.3, 2.0, b), expect, 1e-12 * std::abs(expect));
}

}  // namespace
}  // namespace qbm::action
