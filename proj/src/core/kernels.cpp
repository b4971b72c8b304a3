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

#include "core/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "core/errors.hpp"
#include "core/quadrature.hpp"
#include "core/special.hpp"

namespace qbm::kernels {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxSeriesTerms = 10'000'000;

void check_resonance(double chi) {
  const int n = static_cast<int>(std::lround(chi / kPi));
  if (n >= 1 && std::fabs(chi - n * kPi) < kResonanceGuard * kPi) {
    std::ostringstream os;
    os << "chi = " << chi << " lies within the resonance guard of " << n
       << "*pi where the Matsubara series has a coincident pole; "
          "perturb T by one part in 1e6";
    throw ResonanceError(os.str(), n);
  }
}

}  // namespace

double drude_weight(double omega, const BathSpec& bath) {
  if (omega < 0.0) throw DomainError("drude_weight: omega must be non-negative");
  const double wc = bath.omega_c();
  return (2.0 * bath.M() * bath.gamma() / kPi) * wc * wc / (omega * omega + wc * wc);
}

KernelValue alpha_I(double tau, const BathSpec& bath) {
  if (tau < 0.0) throw DomainError("alpha_I: kernel is defined for tau >= 0");
  const double wc = bath.omega_c();
  return {tau, -bath.M() * bath.gamma() * wc * wc * std::exp(-wc * tau), 1, 0.0};
}

std::vector<double> matsubara_terms(double tau, const BathSpec& bath, int n_max) {
  const double chi = bath.chi();
  check_resonance(chi);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(std::max(n_max, 0)));
  for (int n = 1; n <= n_max; ++n) {
    const double nu = n * kPi / chi;
    terms.push_back((2.0 / chi) * nu / (nu * nu - 1.0) * std::exp(-nu * bath.omega_c() * tau));
  }
  return terms;
}

KernelValue alpha_R_series(double tau, const BathSpec& bath, double rel_tol) {
  if (!(tau > 0.0)) {
    throw DomainError("alpha_R_series: tau must be > 0 (the series diverges at coincident times)");
  }
  const double chi = bath.chi();
  check_resonance(chi);
  const double wc = bath.omega_c();
  const double decay = std::exp(-kPi * wc * tau / chi);  // ratio of successive exponentials

  double sum = std::exp(-wc * tau) / std::tan(chi);
  double exp_n = 1.0;
  int n = 1;
  double next_mag = 0.0;
  for (; n <= kMaxSeriesTerms; ++n) {
    exp_n *= decay;
    const double nu = n * kPi / chi;
    const double term = (2.0 / chi) * nu / (nu * nu - 1.0) * exp_n;
    sum += term;
    // Once nu > 1 the coefficients nu/(nu^2-1) decrease, so the tail is
    // bounded by a geometric series in `decay`.
    const double nu1 = (n + 1) * kPi / chi;
    next_mag = std::fabs((2.0 / chi) * nu1 / (nu1 * nu1 - 1.0) * exp_n * decay);
    if (nu1 > 1.0 && next_mag < rel_tol * std::fabs(sum)) break;
    if (exp_n == 0.0) break;
  }
  if (n > kMaxSeriesTerms) {
    throw ConvergenceError("alpha_R_series: Matsubara sum did not converge", sum, next_mag);
  }
  const double scale = bath.M() * bath.gamma() * wc * wc;
  const double tail = next_mag / (1.0 - decay);
  return {tau, scale * sum, n + 1, scale * tail};
}

KernelValue alpha_R_quadrature(double tau, const BathSpec& bath, double rel_tol,
                               ThermalFactor factor) {
  if (!(tau > 0.0)) throw DomainError("alpha_R_quadrature: tau must be > 0");
  const double wc = bath.omega_c();
  const double thermal = 2.0 * bath.kT() / bath.hbar();  // = wc / chi
  const double pref = 2.0 * bath.M() * bath.gamma() / kPi * wc * wc;

  auto amplitude = [&](double w) {
    // g(w) * w coth(w / thermal), with w coth(w/thermal) = thermal * x coth x.
    const double lorentz = pref / (w * w + wc * wc);
    if (factor == ThermalFactor::Classical) return lorentz * thermal;
    return lorentz * thermal * special::x_coth_x(w / thermal);
  };
  const double smooth_until = 20.0 * std::max(wc, thermal);
  const auto r = quad::integrate_cosine(amplitude, tau, smooth_until, rel_tol);
  return {tau, r.value, r.panels, r.error};
}

std::vector<double> decay_rates(const BathSpec& bath, int n_max) {
  std::vector<double> rates{bath.omega_c()};
  for (int n = 1; n <= n_max; ++n) rates.push_back(n * kPi * bath.omega_c() / bath.chi());
  return rates;
}

double slowest_decay_rate(const BathSpec& bath) {
  return std::min(bath.omega_c(), kPi * bath.omega_c() / bath.chi());
}

}  // namespace qbm::kernels
