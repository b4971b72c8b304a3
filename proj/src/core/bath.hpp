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

namespace qbm {

/// Unit system: hbar and kB. Natural units set both to one.
struct Scales {
  double hbar{1.0};
  double kB{1.0};
};

/// The Brownian particle: mass and damping rate plus unit scales. Everything
/// that does not depend on the bath cutoff takes this instead of a BathSpec.
struct ParticleParams {
  double M{1.0};
  double gamma{1.0};
  Scales scales{};

  void validate() const;
};

/// Physical parameters of the particle + Drude bath.
///
/// Derived groups:
///   chi = hbar*omega_c / (2 kB T)   (cutoff vs. thermal frequency)
///   u   = hbar*gamma   / (2 kB T)   (damping vs. thermal frequency)
///   theta = kB T / (hbar gamma)     (canonical dimensionless temperature)
/// with chi = u * omega_c / gamma.
///
/// T = 0 is rejected here; zero-temperature quantities are only available
/// through the dedicated limit operations.
class BathSpec {
 public:
  BathSpec(double M, double gamma, double omega_c, double T, Scales scales = {});

  /// Temperature given as theta = kB T / (hbar gamma).
  static BathSpec from_theta(double theta, double omega_c, ParticleParams p = {});
  /// Temperature given through chi = hbar omega_c / (2 kB T).
  static BathSpec from_chi(double chi, double omega_c, ParticleParams p = {});

  double M() const noexcept { return M_; }
  double gamma() const noexcept { return gamma_; }
  double omega_c() const noexcept { return omega_c_; }
  double T() const noexcept { return T_; }
  double hbar() const noexcept { return scales_.hbar; }
  double kB() const noexcept { return scales_.kB; }
  const Scales& scales() const noexcept { return scales_; }

  double u() const noexcept { return scales_.hbar * gamma_ / (2.0 * scales_.kB * T_); }
  double chi() const noexcept { return u() * omega_c_ / gamma_; }
  double theta() const noexcept { return scales_.kB * T_ / (scales_.hbar * gamma_); }
  double kT() const noexcept { return scales_.kB * T_; }

  ParticleParams particle() const { return {M_, gamma_, scales_}; }

  BathSpec with_temperature(double T) const { return {M_, gamma_, omega_c_, T, scales_}; }
  BathSpec with_mass(double M) const { return {M, gamma_, omega_c_, T_, scales_}; }
  BathSpec with_gamma(double gamma) const { return {M_, gamma, omega_c_, T_, scales_}; }

  /// Regime warnings; currently only gamma/omega_c > 0.1, where the
  /// effective-action resummation (gamma << omega_c) is no longer accurate.
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  double M_;
  double gamma_;
  double omega_c_;
  double T_;
  Scales scales_;
  std::vector<std::string> warnings_;
};

}  // namespace qbm
