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

#include <vector>

#include "core/bath.hpp"
#include "core/coefficients.hpp"

namespace qbm::moments {

/// First moments and symmetrized covariances of a Gaussian state.
struct GaussianMoments {
  double mq{0.0};
  double mp{0.0};
  double sqq{0.0};
  double spp{0.0};
  double sqp{0.0};
  double t{0.0};
};

struct MomentRates {
  double dmq{0.0};
  double dmp{0.0};
  double dsqq{0.0};
  double dspp{0.0};
  double dsqp{0.0};
};

/// Sign with which D_pq drives the covariance: d sqp/dt contains
/// kPqSign * D_pq. Pinned against grid integrations of the master equation.
inline constexpr double kPqSign = -2.0;

/// Closed moment equations of the master equation:
///   d<q>/dt = <p>/M                 d<p>/dt = -2 gamma <p>
///   d sqq/dt = 2 sqp/M + 2 D_qq
///   d sqp/dt = spp/M - 2 gamma sqp - 2 D_pq
///   d spp/dt = -4 gamma spp + 2 D_pp
MomentRates moment_rhs(const GaussianMoments& m, const coeffs::DiffusionSet& d,
                       const ParticleParams& p);

/// Pure minimum-uncertainty Gaussian with position width sigma0.
GaussianMoments minimum_uncertainty(double q0, double p0, double sigma0, double hbar);

/// Pure Gaussian squeezed by `ratio` and rotated by `angle` in the phase
/// plane scaled by l = sqrt(hbar/(M gamma)) and hbar/l: the scaled
/// covariance is R(angle) diag(ratio/2, 1/(2 ratio)) R(angle)^T.
GaussianMoments squeezed_state(double ratio, double angle, const ParticleParams& p);

struct Trajectory {
  std::vector<GaussianMoments> samples;
  /// Minimum of sqq*spp - sqp^2 over all integration steps.
  double min_uncertainty_product{0.0};
};

/// Classic RK4 on the five moment equations from m0.t to t_end; samples every
/// `sample_every` steps plus the final point. Requires dt * gamma <= 0.01.
Trajectory evolve(const GaussianMoments& m0, const coeffs::DiffusionSet& d,
                  const ParticleParams& p, double t_end, double dt, int sample_every = 1);

/// sqq*spp - sqp^2.
double uncertainty_product(const GaussianMoments& m);

/// True when the uncertainty product is >= hbar^2/4 - tol.
bool is_physical(const GaussianMoments& m, double hbar, double tol = 1e-9);

/// Fixed point of the covariance flow (sqq grows without bound for a free
/// particle, so only spp and sqp are stationary).
struct Stationary {
  double spp{0.0};           ///< D_pp / (2 gamma)
  double sqp{0.0};           ///< (spp/M - 2 D_pq) / (2 gamma)
  double msd_slope{0.0};     ///< late-time d sqq/dt = 2 (sqp/M + D_qq)
};
Stationary stationary(const coeffs::DiffusionSet& d, const ParticleParams& p);

struct SqueezeScanOptions {
  int n_ratios{41};
  double ratio_min{1e-2};
  double ratio_max{1e2};
  int n_angles{24};          ///< phase-plane rotations in [0, pi)
  double t_end_gamma{5.0};   ///< horizon in units of 1/gamma
  double sample_gamma_dt{0.01};
  double dt_gamma{1e-3};
};

struct SqueezeScanResult {
  double min_excess{0.0};    ///< min over states and samples of product - hbar^2/4
  double best_ratio{0.0};
  double best_angle{0.0};
  double best_time{0.0};
  int violating_states{0};
  int states_scanned{0};
};

/// Searches pure squeezed Gaussians (geometric ratio grid x rotation angles)
/// for a time t <= t_end where the uncertainty product falls below hbar^2/4.
SqueezeScanResult squeeze_scan(const coeffs::DiffusionSet& d, const ParticleParams& p,
                               const SqueezeScanOptions& opt = {});

}  // namespace qbm::moments
