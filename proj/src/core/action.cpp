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

#include "core/action.hpp"

#include <cmath>
#include <numbers>

#include "core/errors.hpp"
#include "core/special.hpp"

namespace qbm::action {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kResummationTol = 1e-8;
}  // namespace

double zeta_partial_sum(int l, double chi) {
  if (l < 0) throw DomainError("zeta_partial_sum: order must be >= 0");
  if (!(chi > 0.0)) throw DomainError("zeta_partial_sum: chi must be > 0");
  const double y2 = (chi / kPi) * (chi / kPi);
  double power = 1.0;
  double sum = 0.0;
  for (int m = 0; m <= l; ++m) {
    sum += power * special::zeta_even(m);
    power *= y2;
  }
  return sum;
}

double sigma_r_series_coefficient(int l, const BathSpec& bath) {
  if (l < 1) throw DomainError("sigma_r_series_coefficient: order must be >= 1");
  const double r2 = std::pow(bath.gamma() / bath.omega_c(), 2);
  const double sign = (l % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(r2, l) * zeta_partial_sum(l, bath.chi());
}

double effective_alpha(const BathSpec& bath) {
  const double u = bath.u();
  const double g2 = bath.gamma() * bath.gamma();
  if (u < 1e-4) return u * u / (3.0 * g2) * (1.0 - u * u / 15.0);
  return special::x_coth_x_minus_one(u) / g2;
}

double resummed_bracket(const BathSpec& bath) {
  const double r = bath.gamma() / bath.omega_c();
  return special::x_coth_x(bath.u()) / (1.0 + r * r) - 1.0;
}

EffectiveAction effective_action(const BathSpec& bath) {
  EffectiveAction a;
  a.coeff_qminus_sq = 2.0 * bath.kT() * bath.gamma() * bath.M() / (bath.hbar() * bath.hbar());
  a.alpha = effective_alpha(bath);
  a.bracket = resummed_bracket(bath);
  a.gamma_over_omega_c = bath.gamma() / bath.omega_c();
  a.chi = bath.chi();
  a.gamma_small = a.gamma_over_omega_c <= 0.1;
  a.chi_below_pi = a.chi < kPi;
  return a;
}

double sigma_r_closed_form(double q_minus, double qdot_minus, const BathSpec& bath) {
  const double pref = bath.M() * bath.gamma() * bath.omega_c() / (bath.hbar() * bath.chi());
  const double g2 = bath.gamma() * bath.gamma();
  return -pref * (q_minus * q_minus + qdot_minus * qdot_minus / g2 * resummed_bracket(bath));
}

std::complex<double> sigma_i_coefficient(const BathSpec& bath) {
  return {0.0, -bath.gamma() * bath.M() / bath.hbar()};
}

std::complex<double> sigma_i(double q_minus, double qdot_plus, const BathSpec& bath) {
  return sigma_i_coefficient(bath) * (q_minus * qdot_plus);
}

ResummationCheck resummation_check(const BathSpec& bath, int max_order) {
  if (!(bath.gamma() < bath.omega_c()) || !(bath.chi() < kPi)) {
    throw DomainError(
        "resummation_check: the l-series converges only for gamma < omega_c and chi < pi; "
        "only the closed form is valid there");
  }
  if (max_order < 1) throw DomainError("resummation_check: max_order must be >= 1");

  ResummationCheck out;
  out.bracket = resummed_bracket(bath);
  out.partial_sums.reserve(static_cast<std::size_t>(max_order));

  // Build S_l and (-r^2)^l incrementally rather than calling the per-order
  // helpers, which would make the loop quadratic.
  const double r2 = std::pow(bath.gamma() / bath.omega_c(), 2);
  const double y2 = std::pow(bath.chi() / kPi, 2);
  double s_l = special::zeta_even(0);
  double y_pow = 1.0;
  double weight = 1.0;
  double partial = 0.0;
  for (int l = 1; l <= max_order; ++l) {
    y_pow *= y2;
    s_l += y_pow * special::zeta_even(l);
    weight *= -r2;
    partial += -2.0 * weight * s_l;
    out.partial_sums.push_back(partial);
    if (!out.converged_at &&
        std::fabs(partial - out.bracket) <= kResummationTol * std::fabs(out.bracket)) {
      out.converged_at = l;
    }
  }
  return out;
}

}  // namespace qbm::action
