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

namespace qbm::kernels {

/// One evaluation of a bath memory kernel.
struct KernelValue {
  double tau{0.0};
  double value{0.0};
  int terms_used{0};                       ///< series terms or quadrature panels
  double truncation_error_estimate{0.0};   ///< >= 0
};

/// Guard band around chi = n*pi inside which the closed-form series refuses.
inline constexpr double kResonanceGuard = 1e-6;

/// Drude spectral weight g(w) = (2 M gamma / pi) * wc^2 / (w^2 + wc^2).
double drude_weight(double omega, const BathSpec& bath);

/// Dissipation kernel alpha_I(tau) = -M gamma wc^2 exp(-wc tau); exact.
KernelValue alpha_I(double tau, const BathSpec& bath);

/// Noise kernel alpha_R(tau) from the Matsubara closed form
///   M gamma wc^2 [cot(chi) e^{-wc tau}
///                 + (2/chi) sum_n (n pi/chi)/((n pi/chi)^2 - 1) e^{-(n pi/chi) wc tau}],
/// truncated once the next term drops below rel_tol * |running sum|.
/// Throws ResonanceError when |chi - n pi| < kResonanceGuard * pi and
/// DomainError for tau <= 0 (log divergence at coincident times).
KernelValue alpha_R_series(double tau, const BathSpec& bath, double rel_tol = 1e-14);

/// How coth(hbar w / 2 kB T) enters the spectral integral.
enum class ThermalFactor {
  Quantum,    ///< coth(hbar w / 2 kB T)
  Classical,  ///< its high-temperature form 2 kB T / (hbar w)
};

/// Noise kernel from the spectral integral
///   int_0^inf dw g(w) w coth(hbar w / 2 kB T) cos(w tau),
/// integrated panel-by-panel between zeros of cos(w tau) with Euler
/// acceleration of the alternating tail. Independent of alpha_R_series.
KernelValue alpha_R_quadrature(double tau, const BathSpec& bath, double rel_tol = 1e-8,
                               ThermalFactor factor = ThermalFactor::Quantum);

/// The individual Matsubara terms n = 1..n_max of alpha_R_series at tau,
/// in units of M gamma wc^2 (including the 2/chi prefactor).
std::vector<double> matsubara_terms(double tau, const BathSpec& bath, int n_max);

/// Decay rates present in alpha_R: wc followed by the Matsubara rates
/// n pi wc / chi = 2 pi n kB T / hbar for n = 1..n_max.
std::vector<double> decay_rates(const BathSpec& bath, int n_max);

/// Slowest decay rate of alpha_R, i.e. min(wc, pi wc / chi).
double slowest_decay_rate(const BathSpec& bath);

}  // namespace qbm::kernels
