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
#include <sstream>
#include <string>

#include "core/coefficients.hpp"
#include "core/errors.hpp"
#include "core/meq_grid.hpp"
#include "core/moments.hpp"

namespace qbm::grid {
namespace {

const ParticleParams kNatural{};

GridShape small_shape() { return {129, 16.0, 129, 8.0}; }

TEST(GaussianState, NormalizedPureAndHermitian) {
  const auto rho = gaussian_pure_state(0.5, 0.3, 1.0, small_shape());
  const auto o = observables(rho);
  EXPECT_NEAR(o.trace, 1.0, 1e-14);
  EXPECT_NEAR(o.purity, 1.0, 1e-6);
  EXPECT_NEAR(o.mean_q, 0.5, 1e-10);
  // fourth-order stencil at h_r = 1/8: the h^4 term is about 3e-6 here
  EXPECT_NEAR(o.mean_p, 0.3, 1e-5);
  EXPECT_NEAR(o.sigma_qq, 1.0, 1e-8);
  EXPECT_NEAR(o.sigma_pp, 0.25, 1e-5);
  EXPECT_NEAR(o.sigma_qp, 0.0, 1e-10);
  EXPECT_LT(rho.hermiticity_deviation(), 1e-15);
  EXPECT_FALSE(o.boundary_warning);
}

TEST(GaussianState, CoordinatesOfTheRotatedLattice) {
  const DensityGrid rho(small_shape());
  const std::size_t c = rho.diagonal_column();
  EXPECT_EQ(rho.relative(c), 0.0);
  EXPECT_DOUBLE_EQ(rho.x(10, c), rho.y(10, c));
  EXPECT_NEAR(rho.x(10, c + 2) - rho.y(10, c + 2), 2.0 * rho.h_relative(), 1e-14);
}

TEST(GaussianState, RejectsSmallOrCoarseGrids) {
  EXPECT_THROW(gaussian_pure_state(0, 0, 1.0, {129, 6.0, 129, 8.0}), DomainError);
  EXPECT_THROW(gaussian_pure_state(0, 0, 1.0, {129, 16.0, 129, 7.0}), DomainError);
  EXPECT_THROW(gaussian_pure_state(0, 0, 1.0, {17, 16.0, 129, 8.0}), DomainError);
  EXPECT_THROW(gaussian_pure_state(0, 0, 1.0, {129, 16.0, 128, 8.0}), DomainError);
}

TEST(MasterEquation, RhsPreservesTraceAndHermiticity) {
  const auto d = coeffs::diffusion_constants_theta(1.0, kNatural);
  const auto rho = gaussian_pure_state(0.2, 0.4, 1.0, small_shape());
  const auto f = me_rhs(rho, d, kNatural);
  EXPECT_NEAR(f.trace(), 0.0, 1e-10);
  EXPECT_LT(f.hermiticity_deviation(), 1e-12);
}

TEST(MasterEquation, InitialMomentRatesMatchMomentEquations) {
  // d/dt of the grid moments at t = 0 against the moment equations
  const auto d = coeffs::diffusion_constants_theta(1.0, kNatural);
  const auto rho = gaussian_pure_state(0.0, 0.0, 1.0, small_shape());
  const double h = 1e-4;
  const auto next = step(rho, d, kNatural, h);
  const auto a = observables(rho), b = observables(next);
  const auto r = moments::moment_rhs({a.mean_q, a.mean_p, a.sigma_qq, a.sigma_pp, a.sigma_qp, 0}, d, kNatural);
  EXPECT_NEAR((b.sigma_qq - a.sigma_qq) / h, r.dsqq, 1e-3 * std::abs(r.dsqq));
  EXPECT_NEAR((b.sigma_pp - a.sigma_pp) / h, r.dspp, 1e-3 * std::abs(r.dspp));
  EXPECT_NEAR((b.sigma_qp - a.sigma_qp) / h, r.dsqp, 1e-3 * std::abs(r.dsqp));
}

TEST(Evolve, AgreesWithMomentOde) {
  const auto d = coeffs::diffusion_constants_theta(1.0, kNatural);
  auto rho = gaussian_pure_state(0.5, 0.3, 1.0, small_shape());
  const auto run = evolve(rho, d, kNatural, {2.0, 0.0, 0.5});
  const auto tr = moments::evolve(moments::minimum_uncertainty(0.5, 0.3, 1.0, 1.0), d, kNatural, 2.0, 1e-3, 500);
  ASSERT_EQ(run.samples.size(), tr.samples.size());
  for (std::size_t k = 0; k < tr.samples.size(); ++k) {
    const auto& o = run.samples[k];
    const auto& m = tr.samples[k];
    EXPECT_NEAR(o.t, m.t, 1e-12);
    EXPECT_NEAR(o.sigma_qq / m.sqq, 1.0, 1e-3);
    EXPECT_NEAR(o.sigma_pp / m.spp, 1.0, 1e-3);
    EXPECT_NEAR(o.sigma_qp - m.sqp, 0.0, 1e-3 * std::sqrt(m.sqq * m.spp));
    EXPECT_NEAR(o.mean_p, m.mp, 1e-4);
  }
  EXPECT_LT(run.max_trace_deviation, 1e-6);
  EXPECT_LT(run.max_hermiticity_deviation, 1e-10);
}

TEST(Evolve, UnstableStepReportsLastGoodState) {
  const auto d = coeffs::diffusion_constants_theta(1.0, kNatural);
  auto rho = gaussian_pure_state(0.0, 0.0, 1.0, small_shape());
  MasterEquation eq(d, kNatural);
  const double dt = 50.0 * eq.max_stable_dt(rho.shape());
  try {
    for (int k = 0; k < 2000; ++k) eq.step(rho, dt);
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    const auto& good = e.last_good();
    for (const auto& z : good.data()) ASSERT_TRUE(std::isfinite(z.real()) && std::isfinite(z.imag()));
  }
}

TEST(Snapshots, BinaryRoundTrip) {
  auto rho = gaussian_pure_state(0.5, -0.2, 1.0, {33, 9.0, 33, 8.0});
  rho.set_time(1.25);
  std::stringstream ss;
  write_binary(rho, ss);
  EXPECT_EQ(ss.str().substr(0, 8), "QBMRHO01");
  const auto back = read_binary(ss);
  EXPECT_EQ(back.n_center(), 33u);
  EXPECT_DOUBLE_EQ(back.time(), 1.25);
  for (std::size_t k = 0; k < rho.data().size(); ++k) EXPECT_EQ(back.data()[k], rho.data()[k]);
}

TEST(Snapshots, RejectsForeignData) {
  std::stringstream ss("not a snapshot at all");
  EXPECT_THROW(read_binary(ss), DomainError);
}

TEST(Snapshots, CsvLayout) {
  const auto rho = gaussian_pure_state(0.0, 0.0, 1.0, {17, 8.0, 9, 8.0});
  std::stringstream ss;
  write_csv(rho, ss);
  int data = 0;
  bool header = false;
  for (std::string line; std::getline(ss, line);) {
    if (line.rfind('#', 0) == 0) continue;
    if (!header) {
      EXPECT_EQ(line, "x,y,re,im");
      header = true;
      continue;
    }
    ++data;
  }
  EXPECT_EQ(data, 17 * 9);
}

TEST(MaxStableDt, ShrinksWithResolutionAndTemperature) {
  const auto d1 = coeffs::diffusion_constants_theta(1.0, kNatural);
  const auto d10 = coeffs::diffusion_constants_theta(10.0, kNatural);
  const MasterEquation e1(d1, kNatural), e10(d10, kNatural);
  EXPECT_GT(e1.max_stable_dt({129, 16, 129, 8}), e1.max_stable_dt({257, 16, 257, 8}));
  EXPECT_GT(e1.max_stable_dt({129, 16, 129, 8}), e10.max_stable_dt({129, 16, 129, 8}));
}

}  // namespace
}  // namespace qbm::grid
