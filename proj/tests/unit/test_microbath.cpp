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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/bath.hpp"
#include "core/errors.hpp"
#include "core/kernels.hpp"
#include "core/microbath.hpp"

namespace qbm::microbath {
namespace {

// wc = 1, gamma = M = 1
BathSpec unit_bath(double theta = 1.0) { return BathSpec(1.0, 1.0, 1.0, theta); }

TEST(SampleDrude, ZeroLagSumIsTruncatedLorentzian) {
  for (auto scheme : {Scheme::Grid, Scheme::Stratified}) {
    const auto e = sample_drude(unit_bath(), 100, 50.0, scheme, 7);
    EXPECT_NEAR(friction_kernel_discrete(e, 0.0), 0.98726930179805441, 1e-13);
    EXPECT_NEAR(1.0 - cutoff_tail_mass(e.bath, 50.0), 0.98726930179805441, 1e-15);
  }
}

TEST(SampleDrude, Preconditions) {
  EXPECT_THROW(sample_drude(unit_bath(), 8, 50.0), DomainError);
  EXPECT_THROW(sample_drude(unit_bath(), 64, 5.0), DomainError);
  const auto e = sample_drude(unit_bath(), 64, 0.0);
  EXPECT_DOUBLE_EQ(e.omega_max, 50.0);
  for (double w : e.omegas) EXPECT_GT(w, 0.0);
  for (double m : e.masses) EXPECT_EQ(m, 1.0);
}

TEST(BandLimited, ReferenceValues) {
  // 30-digit quadrature of (2/pi) int_0^50 cos(w t)/(1 + w^2) dw
  const struct {
    double t, value;
  } refs[] = {{0.3, 0.74143822888679712}, {1.0, 0.36780303888655261}, {4.0, 0.018259763797088461}};
  for (const auto& r : refs) EXPECT_NEAR(friction_kernel_band_limited(unit_bath(), 50.0, r.t), r.value, 1e-11);
}

TEST(FrictionKernel, ConvergesToBandLimitedLimit) {
  const auto e = sample_drude(unit_bath(), 10000, 50.0);
  const auto c = compare(e, Kernel::Friction, Reference::BandLimited, 0.0, 5.0, 51);
  EXPECT_LT(c.linf_rel_error, 1e-5);
}

TEST(FrictionKernel, ContinuumGapIsTheCutoffTail) {
  // the residual against M gamma wc e^{-wc t} is the omitted tail weight
  const auto e = sample_drude(unit_bath(), 10000, 50.0);
  const auto c = compare(e, Kernel::Friction, Reference::Continuum, 0.0, 5.0, 51);
  EXPECT_NEAR(c.linf_rel_error, cutoff_tail_mass(e.bath, 50.0), 1e-6);
}

TEST(FrictionKernel, ErrorDropsWithModeCount) {
  const auto e16 = sample_drude(unit_bath(), 16, 50.0);
  const auto e32 = sample_drude(unit_bath(), 32, 50.0);
  const double t_max = validity_window(e16);
  const double a = compare(e16, Kernel::Friction, Reference::BandLimited, 0.0, t_max, 101).linf_rel_error;
  const double b = compare(e32, Kernel::Friction, Reference::BandLimited, 0.0, t_max, 101).linf_rel_error;
  EXPECT_GE(a / b, 1.8);
}

TEST(FrictionKernel, RecurrenceBeyondValidityWindow) {
  const auto e = sample_drude(unit_bath(), 64, 50.0);
  const double w = validity_window(e);
  EXPECT_NEAR(w, std::numbers::pi * 64 / 50.0, 1e-14);
  const double inside = compare(e, Kernel::Friction, Reference::BandLimited, 0.0, 0.8 * w, 201).linf_rel_error;
  const double across = compare(e, Kernel::Friction, Reference::BandLimited, 0.0, 2.2 * w, 201).linf_rel_error;
  EXPECT_LT(inside, 0.05);
  EXPECT_GT(across, 0.5);
}

TEST(AlphaKernels, DiscreteSumsMatchBandLimitedIntegrals) {
  const auto b = BathSpec::from_chi(1.0, 1.0, {});
  const auto e = sample_drude(b, 10000, 50.0);
  const auto ci = compare(e, Kernel::AlphaI, Reference::BandLimited, 0.2, 5.0, 25);
  const auto cr = compare(e, Kernel::AlphaR, Reference::BandLimited, 0.2, 5.0, 25);
  for (const auto& r : ci.rows) EXPECT_LT(r.rel_error, 1e-2) << r.tau;
  for (const auto& r : cr.rows) EXPECT_LT(r.rel_error, 1e-2) << r.tau;
}

TEST(AlphaKernels, BandLimitedAlphaRApproachesFullKernel) {
  // wider band, same density: the series value is the limit
  const auto b = BathSpec::from_chi(1.0, 1.0, {});
  const double full = kernels::alpha_R_series(1.0, b).value;
  const double a = std::abs(alpha_R_band_limited(b, 50.0, 1.0) - full);
  const double c = std::abs(alpha_R_band_limited(b, 400.0, 1.0) - full);
  EXPECT_LT(c, a);
  EXPECT_LT(c, 1e-2 * std::abs(full));
}

TEST(AlphaKernels, EvenAndOddInTau) {
  const auto e = sample_drude(unit_bath(), 256, 50.0);
  EXPECT_DOUBLE_EQ(alpha_R_discrete(e, 0.7), alpha_R_discrete(e, -0.7));
  EXPECT_DOUBLE_EQ(alpha_I_discrete(e, 0.7), -alpha_I_discrete(e, -0.7));
}

TEST(Schemes, GridAndStratifiedAgree) {
  const auto g = sample_drude(unit_bath(), 4096, 50.0, Scheme::Grid);
  const auto s = sample_drude(unit_bath(), 4096, 50.0, Scheme::Stratified, 11);
  double worst = 0.0;
  for (double t = 0.0; t <= 5.0; t += 0.25) {
    worst = std::max(worst, std::abs(friction_kernel_discrete(g, t) - friction_kernel_discrete(s, t)));
  }
  EXPECT_LT(worst, 2e-3);
}

TEST(Linearity, SumsScaleWithMassAndDamping) {
  const auto a = sample_drude(BathSpec(1.0, 1.0, 1.0, 1.0), 128, 50.0);
  const auto b = sample_drude(BathSpec(3.0, 2.0, 1.0, 1.0), 128, 50.0);
  for (double t : {0.0, 0.4, 1.7}) {
    EXPECT_NEAR(friction_kernel_discrete(b, t), 6.0 * friction_kernel_discrete(a, t), 1e-12);
    EXPECT_NEAR(alpha_I_discrete(b, t), 6.0 * alpha_I_discrete(a, t), 1e-11);
  }
}

}  // namespace
}  // namespace qbm::microbath
