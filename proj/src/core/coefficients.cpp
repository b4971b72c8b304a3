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

#include "core/coefficients.hpp"

#include <cmath>
#include <sstream>

#include "core/errors.hpp"
#include "core/special.hpp"

namespace qbm::coeffs {

namespace {

constexpr double kThetaLow = 0.01;
constexpr double kThetaHigh = 10.0;
constexpr double kRootRelTol = 1e-10;

// Reduced positivity function X(u)/u^2 - 1/4, strictly decreasing in u.
double reduced(double u) { return special::x_coth_x_minus_one_over_x2(u) - 0.25; }

}  // namespace

DiffusionSet diffusion_constants(double T, const ParticleParams& p) {
  p.validate();
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw DomainError("diffusion_constants: T must be > 0; use the zero-temperature limits");
  }
  const double hbar = p.scales.hbar;
  const double kT = p.scales.kB * T;
  const double u = hbar * p.gamma / (2.0 * kT);
  const double X = special::x_coth_x_minus_one(u);

  DiffusionSet d;
  d.T = T;
  d.theta = kT / (hbar * p.gamma);
  d.gamma = p.gamma;
  d.hbar = hbar;
  d.D_qq = 2.0 * kT / (p.M * p.gamma) * X;
  d.D_pq = 4.0 * kT * X;
  // 4 u coth u - 3 = 1 + 4X
  d.D_pp = 2.0 * p.M * p.gamma * kT * (1.0 + 4.0 * X);
  d.Delta = delta(d);
  return d;
}

DiffusionSet diffusion_constants(const BathSpec& bath) {
  return diffusion_constants(bath.T(), bath.particle());
}

DiffusionSet diffusion_constants_theta(double theta, const ParticleParams& p) {
  if (!(theta > 0.0)) throw DomainError("theta must be > 0; use the zero-temperature limits");
  return diffusion_constants(theta * p.scales.hbar * p.gamma / p.scales.kB, p);
}

double delta(const DiffusionSet& d) {
  const double hg = d.hbar * d.gamma;
  return d.D_pp * d.D_qq - d.D_pq * d.D_pq - 0.25 * hg * hg;
}

double delta_reduced(double u, double hbar, double gamma) {
  const double hg = hbar * gamma;
  return hg * hg * reduced(u);
}

DiffusionSet zero_temperature_limits(const ParticleParams& p, double theta_probe) {
  if (!(theta_probe > 0.0)) throw DomainError("theta_probe must be > 0");
  const DiffusionSet a = diffusion_constants_theta(theta_probe, p);
  const DiffusionSet b = diffusion_constants_theta(0.5 * theta_probe, p);
  const DiffusionSet c = diffusion_constants_theta(0.25 * theta_probe, p);
  // Two Richardson levels: kills the O(theta) and O(theta^2) terms.
  auto extrapolate = [](double fa, double fb, double fc) {
    const double r1 = 2.0 * fb - fa;
    const double r2 = 2.0 * fc - fb;
    return (4.0 * r2 - r1) / 3.0;
  };
  DiffusionSet z;
  z.gamma = p.gamma;
  z.hbar = p.scales.hbar;
  z.D_qq = extrapolate(a.D_qq, b.D_qq, c.D_qq);
  z.D_pq = extrapolate(a.D_pq, b.D_pq, c.D_pq);
  z.D_pp = extrapolate(a.D_pp, b.D_pp, c.D_pp);
  z.Delta = extrapolate(a.Delta, b.Delta, c.Delta);
  return z;
}

CriticalTemperature critical_temperature(const ParticleParams& p) {
  p.validate();
  auto delta_at = [&](double theta) { return diffusion_constants_theta(theta, p).Delta; };

  double lo = kThetaLow;
  double hi = kThetaHigh;
  if (!(delta_at(lo) < 0.0 && delta_at(hi) > 0.0)) {
    throw NumericalError("critical_temperature: Delta does not change sign on [0.01, 10]");
  }
  CriticalTemperature out;
  while (hi - lo > kRootRelTol * lo) {
    const double mid = 0.5 * (lo + hi);
    (delta_at(mid) < 0.0 ? lo : hi) = mid;
    ++out.iterations;
  }
  out.theta0 = 0.5 * (lo + hi);
  out.T0 = out.theta0 * p.scales.hbar * p.gamma / p.scales.kB;

  // u = 1/(2 theta); reduced() is decreasing in u.
  double ulo = 1.0 / (2.0 * kThetaHigh);
  double uhi = 1.0 / (2.0 * kThetaLow);
  while (uhi - ulo > kRootRelTol * ulo) {
    const double mid = 0.5 * (ulo + uhi);
    (reduced(mid) > 0.0 ? ulo : uhi) = mid;
  }
  out.u_star = 0.5 * (ulo + uhi);
  return out;
}

HighTExpansion high_t_expansion(double T, const ParticleParams& p) {
  p.validate();
  if (!(T > 0.0)) throw DomainError("high_t_expansion: T must be > 0");
  const double hbar = p.scales.hbar;
  const double kT = p.scales.kB * T;
  const double ratio = hbar * p.gamma / kT;  // = 1/theta

  HighTExpansion e;
  e.theta = 1.0 / ratio;
  e.D_qq_leading = hbar * hbar * p.gamma / (6.0 * p.M * kT);
  e.D_pq_leading = hbar * hbar * p.gamma * p.gamma / (3.0 * kT);
  e.D_pp_leading = 2.0 * p.M * p.gamma * kT;
  e.qq_correction = -ratio * ratio / 60.0;
  e.pq_correction = -ratio * ratio / 60.0;
  e.pp_correction = ratio * ratio / 3.0;
  if (e.theta <= 10.0) {
    std::ostringstream os;
    os << "theta = " << e.theta << " <= 10: high-temperature expansion unreliable";
    e.reliable = false;
    e.warning = os.str();
  }
  return e;
}

HighTExpansion high_t_expansion(const BathSpec& bath) {
  return high_t_expansion(bath.T(), bath.particle());
}

std::vector<DiffusionSet> sweep(double theta_min, double theta_max, int n_points, bool log_spacing,
                                const ParticleParams& p) {
  if (!(theta_min > 0.0) || !(theta_max > theta_min)) {
    throw DomainError("sweep: need 0 < theta_min < theta_max");
  }
  if (n_points < 2) throw DomainError("sweep: need at least two points");
  std::vector<DiffusionSet> rows;
  rows.reserve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double f = static_cast<double>(i) / (n_points - 1);
    double theta = log_spacing
                       ? std::exp(std::log(theta_min) + f * (std::log(theta_max) - std::log(theta_min)))
                       : theta_min + f * (theta_max - theta_min);
    if (i == n_points - 1) theta = theta_max;
    rows.push_back(diffusion_constants_theta(theta, p));
  }
  return rows;
}

}  // namespace qbm::coeffs
