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

#include "core/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "core/errors.hpp"

namespace qbm::moments {

namespace {

GaussianMoments advance(const GaussianMoments& m, const MomentRates& r, double h) {
  return {m.mq + h * r.dmq, m.mp + h * r.dmp, m.sqq + h * r.dsqq,
          m.spp + h * r.dspp, m.sqp + h * r.dsqp, m.t + h};
}

GaussianMoments rk4(const GaussianMoments& m, const coeffs::DiffusionSet& d,
                    const ParticleParams& p, double dt) {
  const MomentRates k1 = moment_rhs(m, d, p);
  const MomentRates k2 = moment_rhs(advance(m, k1, 0.5 * dt), d, p);
  const MomentRates k3 = moment_rhs(advance(m, k2, 0.5 * dt), d, p);
  const MomentRates k4 = moment_rhs(advance(m, k3, dt), d, p);
  const double w = dt / 6.0;
  return {m.mq + w * (k1.dmq + 2 * k2.dmq + 2 * k3.dmq + k4.dmq),
          m.mp + w * (k1.dmp + 2 * k2.dmp + 2 * k3.dmp + k4.dmp),
          m.sqq + w * (k1.dsqq + 2 * k2.dsqq + 2 * k3.dsqq + k4.dsqq),
          m.spp + w * (k1.dspp + 2 * k2.dspp + 2 * k3.dspp + k4.dspp),
          m.sqp + w * (k1.dsqp + 2 * k2.dsqp + 2 * k3.dsqp + k4.dsqp),
          m.t + dt};
}

}  // namespace

MomentRates moment_rhs(const GaussianMoments& m, const coeffs::DiffusionSet& d,
                       const ParticleParams& p) {
  const double g = p.gamma;
  return {m.mp / p.M,
          -2.0 * g * m.mp,
          2.0 * m.sqp / p.M + 2.0 * d.D_qq,
          -4.0 * g * m.spp + 2.0 * d.D_pp,
          m.spp / p.M - 2.0 * g * m.sqp + kPqSign * d.D_pq};
}

GaussianMoments minimum_uncertainty(double q0, double p0, double sigma0, double hbar) {
  if (!(sigma0 > 0.0)) throw DomainError("minimum_uncertainty: sigma0 must be > 0");
  return {q0, p0, sigma0 * sigma0, hbar * hbar / (4.0 * sigma0 * sigma0), 0.0, 0.0};
}

GaussianMoments squeezed_state(double ratio, double angle, const ParticleParams& p) {
  if (!(ratio > 0.0)) throw DomainError("squeezed_state: ratio must be > 0");
  const double hbar = p.scales.hbar;
  const double len2 = hbar / (p.M * p.gamma);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double a = 0.5 * ratio;
  const double b = 0.5 / ratio;
  GaussianMoments m;
  m.sqq = len2 * (c * c * a + s * s * b);
  m.spp = hbar * hbar / len2 * (s * s * a + c * c * b);
  m.sqp = hbar * c * s * (a - b);
  return m;
}

Trajectory evolve(const GaussianMoments& m0, const coeffs::DiffusionSet& d,
                  const ParticleParams& p, double t_end, double dt, int sample_every) {
  if (!(dt > 0.0) || dt * p.gamma > 0.01 + 1e-15) {
    throw DomainError("moments::evolve: need 0 < dt <= 0.01/gamma");
  }
  if (t_end < m0.t) throw DomainError("moments::evolve: t_end before initial time");
  if (sample_every < 1) sample_every = 1;
  const auto steps = static_cast<long>(std::ceil((t_end - m0.t) / dt - 1e-9));
  const double h = steps > 0 ? (t_end - m0.t) / static_cast<double>(steps) : 0.0;

  Trajectory tr;
  tr.samples.push_back(m0);
  tr.min_uncertainty_product = uncertainty_product(m0);
  GaussianMoments m = m0;
  for (long k = 1; k <= steps; ++k) {
    m = rk4(m, d, p, h);
    m.t = m0.t + static_cast<double>(k) * h;
    tr.min_uncertainty_product = std::min(tr.min_uncertainty_product, uncertainty_product(m));
    if (k % sample_every == 0 || k == steps) tr.samples.push_back(m);
  }
  return tr;
}

double uncertainty_product(const GaussianMoments& m) { return m.sqq * m.spp - m.sqp * m.sqp; }

bool is_physical(const GaussianMoments& m, double hbar, double tol) {
  return uncertainty_product(m) >= 0.25 * hbar * hbar - tol;
}

Stationary stationary(const coeffs::DiffusionSet& d, const ParticleParams& p) {
  Stationary s;
  s.spp = d.D_pp / (2.0 * p.gamma);
  s.sqp = (s.spp / p.M + kPqSign * d.D_pq) / (2.0 * p.gamma);
  s.msd_slope = 2.0 * (s.sqp / p.M + d.D_qq);
  return s;
}

SqueezeScanResult squeeze_scan(const coeffs::DiffusionSet& d, const ParticleParams& p,
                               const SqueezeScanOptions& opt) {
  if (opt.n_ratios < 1 || opt.n_angles < 1) throw DomainError("squeeze_scan: empty scan");
  const double hbar = p.scales.hbar;
  const double bound = 0.25 * hbar * hbar;
  const double dt = opt.dt_gamma / p.gamma;
  const int cadence = std::max(1, static_cast<int>(std::lround(opt.sample_gamma_dt / opt.dt_gamma)));
  const double t_end = opt.t_end_gamma / p.gamma;

  SqueezeScanResult res;
  res.min_excess = std::numeric_limits<double>::infinity();
  for (int i = 0; i < opt.n_ratios; ++i) {
    const double f = opt.n_ratios == 1 ? 0.0 : static_cast<double>(i) / (opt.n_ratios - 1);
    const double ratio = opt.ratio_min * std::pow(opt.ratio_max / opt.ratio_min, f);
    for (int j = 0; j < opt.n_angles; ++j) {
      const double angle = std::numbers::pi * j / opt.n_angles;
      const Trajectory tr = evolve(squeezed_state(ratio, angle, p), d, p, t_end, dt, cadence);
      double state_min = std::numeric_limits<double>::infinity();
      double state_time = 0.0;
      for (std::size_t k = 1; k < tr.samples.size(); ++k) {
        const double e = uncertainty_product(tr.samples[k]) - bound;
        if (e < state_min) {
          state_min = e;
          state_time = tr.samples[k].t;
        }
      }
      ++res.states_scanned;
      if (state_min < 0.0) ++res.violating_states;
      if (state_min < res.min_excess) {
        res.min_excess = state_min;
        res.best_ratio = ratio;
        res.best_angle = angle;
        res.best_time = state_time;
      }
    }
  }
  return res;
}

}  // namespace qbm::moments
