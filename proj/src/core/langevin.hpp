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

#include <cstdint>
#include <string>
#include <vector>

#include "core/bath.hpp"

namespace qbm::langevin {

/// Free classical particle, dp = -gamma_cl p dt + sqrt(Gamma) dW, dq = p/M dt,
/// with Gamma = 2 M gamma_cl kB T. Gamma is derived, never an input.
struct LangevinConfig {
  double gamma_cl{1.0};
  double T{1.0};
  double M{1.0};
  double kB{1.0};
  double dt{0.01};
  long n_steps{2000};
  long n_traj{100000};
  std::uint64_t seed{0x5eed};
  double q0{0.0};
  double p0{0.0};
  long sample_every{10};     ///< record ensemble moments every k steps
  double stationary_from{-1.0};  ///< start of the averaging window; < 0 means half of t_end
  /// Each step's Wiener increment is the sum of this many sub-increments of
  /// variance dt/r, so (dt, r = 2) and (dt/2, r = 1) share one noise path.
  int noise_refinement{1};

  double Gamma() const noexcept { return 2.0 * M * gamma_cl * kB * T; }
  double t_end() const noexcept { return dt * static_cast<double>(n_steps); }
  /// Throws DomainError on non-positive rates/sizes or dt*gamma_cl > 0.01.
  void validate() const;
};

struct LangevinSample {
  double t{0.0};
  double mean_p{0.0};
  double mean_p_se{0.0};
  double p2{0.0};  ///< <p^2>
  double p2_se{0.0};
  double var_p{0.0};
  double mean_q{0.0};
  double var_q{0.0};
  double msd{0.0};  ///< <(q - q0)^2>
  double msd_se{0.0};
};

struct LangevinResult {
  LangevinConfig config;
  std::vector<LangevinSample> samples;
  /// <p^2> averaged over the window [stationary_from, t_end]; the standard
  /// error is taken across trajectories, so time correlation is accounted for.
  double stationary_p2{0.0};
  double stationary_p2_se{0.0};
  /// Least-squares slope of the MSD over the same window, with its standard
  /// error across trajectories.
  double msd_slope{0.0};
  double msd_slope_se{0.0};
};

/// Euler-Maruyama ensemble. Trajectory k draws from its own generator seeded
/// by splitmix64(seed, k); sums are reduced in trajectory order in fixed
/// chunks, so results are bit-reproducible.
LangevinResult simulate(const LangevinConfig& cfg);

/// Classical counterpart of the master-equation dynamics: gamma_cl = 2 gamma
/// (momentum relaxation rate of the master equation), dt = 0.01/gamma_cl,
/// t_end = 20/gamma_cl.
struct Correspondence {
  LangevinConfig config;
  std::vector<std::string> warnings;
};
Correspondence correspondence_map(const BathSpec& bath, long n_traj = 100000, std::uint64_t seed = 0x5eed);

/// Analytic Ornstein-Uhlenbeck references.
double ou_mean_p(const LangevinConfig& cfg, double t);
double ou_stationary_p2(const LangevinConfig& cfg);  ///< M kB T
double ou_msd_slope(const LangevinConfig& cfg);      ///< 2 kB T / (M gamma_cl)
/// Stationary <p^2> of the Euler-Maruyama recursion itself:
/// M kB T / (1 - gamma_cl dt / 2).
double em_stationary_p2(const LangevinConfig& cfg);

std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t stream);

}  // namespace qbm::langevin
