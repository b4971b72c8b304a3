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

#include <string>
#include <vector>

#include "core/bath.hpp"

namespace qbm::coeffs {

/// Diffusion constants of the master equation at one temperature.
///
/// With u = hbar gamma / (2 kB T) and X = u coth u - 1:
///   D_qq = (2 kB T / M gamma) X
///   D_pq = 4 kB T X
///   D_pp = 2 M gamma kB T (4 u coth u - 3)
///   Delta = D_pp D_qq - D_pq^2 - hbar^2 gamma^2 / 4
/// D_pq is kept exactly as written above, i.e. in energy units; Delta comes
/// out in units of (hbar gamma)^2 regardless.
struct DiffusionSet {
  double T{0.0};
  double theta{0.0};
  double gamma{0.0};
  double hbar{0.0};
  double D_qq{0.0};
  double D_pq{0.0};
  double D_pp{0.0};
  double Delta{0.0};
};

/// Throws DomainError for T <= 0; use zero_temperature_limits() there.
DiffusionSet diffusion_constants(double T, const ParticleParams& p);
DiffusionSet diffusion_constants(const BathSpec& bath);
DiffusionSet diffusion_constants_theta(double theta, const ParticleParams& p);

/// Delta recomputed from the three stored constants.
double delta(const DiffusionSet& d);

/// Delta from the reduced form hbar^2 gamma^2 [X/u^2 - 1/4]. Secondary check
/// only; diffusion_constants() never goes through it.
double delta_reduced(double u, double hbar, double gamma);

/// Zero-temperature constants obtained numerically: the finite-T formulas
/// are evaluated at theta_probe, theta_probe/2 and theta_probe/4 and
/// Richardson-extrapolated to theta = 0 (the leading correction is linear
/// in theta). T and theta of the result are 0.
DiffusionSet zero_temperature_limits(const ParticleParams& p, double theta_probe = 1e-4);

struct CriticalTemperature {
  double theta0{0.0};  ///< kB T0 / (hbar gamma)
  double T0{0.0};
  double u_star{0.0};  ///< root of (u coth u - 1)/u^2 = 1/4
  int iterations{0};
};

/// Root of Delta(T) = 0 by bisection on theta in [0.01, 10] to 1e-10
/// relative, together with an independent bisection for u* on the reduced
/// form. Delta is strictly increasing in T, so the root is unique.
CriticalTemperature critical_temperature(const ParticleParams& p);

/// Leading high-temperature forms and the first relative corrections,
/// obtained from the expansion u coth u - 1 = u^2/3 - u^4/45 + ...
///   D_qq ~ hbar^2 gamma / (6 M kB T) * (1 + qq_correction)
///   D_pq ~ hbar^2 gamma^2 / (3 kB T) * (1 + pq_correction)
///   D_pp ~ 2 M gamma kB T           * (1 + pp_correction)
/// where pp_correction = (1/3) (hbar gamma / kB T)^2 and
/// qq_correction = pq_correction = -(1/60) (hbar gamma / kB T)^2.
struct HighTExpansion {
  double theta{0.0};
  double D_qq_leading{0.0};
  double D_pq_leading{0.0};
  double D_pp_leading{0.0};
  double qq_correction{0.0};
  double pq_correction{0.0};
  double pp_correction{0.0};
  bool reliable{true};   ///< false for theta <= 10
  std::string warning;
};

HighTExpansion high_t_expansion(const BathSpec& bath);
HighTExpansion high_t_expansion(double T, const ParticleParams& p);

/// Constants on a theta grid (log- or linearly spaced), in input order.
std::vector<DiffusionSet> sweep(double theta_min, double theta_max, int n_points, bool log_spacing,
                                const ParticleParams& p);

}  // namespace qbm::coeffs
