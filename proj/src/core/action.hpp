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

#include <complex>
#include <optional>
#include <vector>

#include "core/bath.hpp"

namespace qbm::action {

/// Local effective action of the free Brownian particle after resumming the
/// Taylor-expanded noise kernel. Bulk Lagrangian density only: boundary
/// (total-derivative) terms and transients ~ exp(-kB T tau / hbar) are not
/// represented, so it applies for tau >> hbar / kB T.
struct EffectiveAction {
  double coeff_qminus_sq{0.0};  ///< 2 kB T gamma M / hbar^2
  double alpha{0.0};            ///< coefficient of qdot_-^2, units time^2
  double bracket{0.0};          ///< u coth(u) / (1 + (gamma/wc)^2) - 1
  double gamma_over_omega_c{0.0};
  double chi{0.0};
  bool gamma_small{true};       ///< gamma/wc <= 0.1
  bool chi_below_pi{true};      ///< chi < pi: the l-series converges
};

/// S_l = sum_{m=0}^{l} (chi/pi)^{2m} zeta(2m), with zeta(0) = -1/2.
double zeta_partial_sum(int l, double chi);

/// Weight c_l = (-1)^l (gamma/wc)^{2l} S_l(chi) multiplying qdot_-^2/gamma^2
/// after inserting q^{(l)} = (-gamma)^{l-1} p / M; the resummed bracket is
/// -2 sum_{l>=1} c_l.
double sigma_r_series_coefficient(int l, const BathSpec& bath);

/// alpha = (u coth u - 1) / gamma^2, u = hbar gamma / (2 kB T).
double effective_alpha(const BathSpec& bath);

/// Closed-form bracket {u coth(u) / (1 + (gamma/wc)^2) - 1}, u = gamma chi / wc.
double resummed_bracket(const BathSpec& bath);

EffectiveAction effective_action(const BathSpec& bath);

/// Real part Sigma_R of the local action density:
///   -(M gamma wc / hbar chi) [q_-^2 + (qdot_-^2 / gamma^2) * bracket].
double sigma_r_closed_form(double q_minus, double qdot_minus, const BathSpec& bath);

/// Coefficient of q_- qdot_+ in Sigma_I: -i gamma M / hbar. No T dependence.
std::complex<double> sigma_i_coefficient(const BathSpec& bath);

/// Sigma_I = -(i gamma M / hbar) q_- qdot_+.
std::complex<double> sigma_i(double q_minus, double qdot_plus, const BathSpec& bath);

struct ResummationCheck {
  std::vector<double> partial_sums;  ///< -2 sum_{l=1}^{L} c_l, L = 1..max_order
  double bracket{0.0};               ///< closed-form target
  std::optional<int> converged_at;   ///< first L with |partial - bracket| <= 1e-8 |bracket|
  bool passed() const noexcept { return converged_at.has_value(); }
};

/// Accumulates the l-series of the qdot_-^2 coefficient up to max_order and
/// compares it with the closed-form bracket. The double series only
/// converges for gamma < wc and chi < pi; outside that region a DomainError
/// is raised.
ResummationCheck resummation_check(const BathSpec& bath, int max_order = 200);

}  // namespace qbm::action
