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

#include "core/microbath.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "core/errors.hpp"
#include "core/kernels.hpp"
#include "core/quadrature.hpp"

namespace qbm::microbath {

namespace {

constexpr double kPi = std::numbers::pi;

// integral of g over [a, b]
double cell_mass(const BathSpec& bath, double a, double b) {
  const double wc = bath.omega_c();
  return 2.0 * bath.M() * bath.gamma() / kPi * wc * (std::atan(b / wc) - std::atan(a / wc));
}

// int_0^wmax h(w) dw on panels short enough to resolve cos/sin(w t)
double band_integral(const quad::Integrand& h, double omega_max, double t) {
  const double width = t > 0.0 ? std::min(omega_max, kPi / t) : omega_max;
  const auto panels = static_cast<int>(std::ceil(omega_max / width));
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double a = omega_max * k / panels;
    const double b = omega_max * (k + 1) / panels;
    sum += quad::gauss_kronrod(h, a, b, 0.0, 1e-12).value;
  }
  return sum;
}

double coth(double x) { return 1.0 / std::tanh(x); }

}  // namespace

ModeEnsemble sample_drude(const BathSpec& bath, std::size_t n_modes, double omega_max, Scheme scheme,
                          std::uint64_t seed) {
  if (omega_max <= 0.0) omega_max = 50.0 * bath.omega_c();
  if (n_modes < 16) throw DomainError("microbath needs at least 16 modes");
  if (omega_max < 10.0 * bath.omega_c() * (1.0 - 1e-12)) throw DomainError("omega_max must be at least 10*omega_c");
  if (!std::isfinite(omega_max)) throw DomainError("omega_max must be finite");

  ModeEnsemble ens{bath, omega_max, scheme, {}, {}, {}};
  ens.omegas.resize(n_modes);
  ens.masses.assign(n_modes, 1.0);
  ens.couplings.resize(n_modes);
  const double dw = omega_max / static_cast<double>(n_modes);
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < n_modes; ++i) {
    const double a = dw * static_cast<double>(i);
    const double b = dw * static_cast<double>(i + 1);
    double w = 0.5 * (a + b);
    if (scheme == Scheme::Stratified) {
      do {
        w = a + dw * unit(gen);
      } while (w <= 0.0);
    }
    ens.omegas[i] = w;
    ens.couplings[i] = std::sqrt(2.0 * cell_mass(bath, a, b) * ens.masses[i] * w * w);
  }
  return ens;
}

double friction_kernel_discrete(const ModeEnsemble& ens, double t) {
  if (t < 0.0) throw DomainError("t must be non-negative");
  double s = 0.0;
  for (std::size_t i = 0; i < ens.n_modes(); ++i) s += ens.weight(i) * std::cos(ens.omegas[i] * t);
  return s;
}

double alpha_R_discrete(const ModeEnsemble& ens, double tau, double T) {
  if (!(T > 0.0)) throw DomainError("temperature must be positive");
  const double beta_half = ens.bath.hbar() / (2.0 * ens.bath.kB() * T);
  double s = 0.0;
  for (std::size_t i = 0; i < ens.n_modes(); ++i) {
    const double w = ens.omegas[i];
    s += ens.weight(i) * w * coth(beta_half * w) * std::cos(w * tau);
  }
  return s;
}

double alpha_R_discrete(const ModeEnsemble& ens, double tau) { return alpha_R_discrete(ens, tau, ens.bath.T()); }

double alpha_I_discrete(const ModeEnsemble& ens, double tau) {
  double s = 0.0;
  for (std::size_t i = 0; i < ens.n_modes(); ++i) {
    const double w = ens.omegas[i];
    s += ens.weight(i) * w * std::sin(w * tau);
  }
  return -s;
}

double validity_window(const ModeEnsemble& ens) {
  return kPi * static_cast<double>(ens.n_modes()) / ens.omega_max;
}

double cutoff_tail_mass(const BathSpec& bath, double omega_max) {
  return 1.0 - 2.0 / kPi * std::atan(omega_max / bath.omega_c());
}

double friction_kernel_continuum(const BathSpec& bath, double t) {
  return bath.M() * bath.gamma() * bath.omega_c() * std::exp(-bath.omega_c() * std::abs(t));
}

double friction_kernel_band_limited(const BathSpec& bath, double omega_max, double t) {
  return band_integral([&](double w) { return kernels::drude_weight(w, bath) * std::cos(w * t); }, omega_max, t);
}

double alpha_I_band_limited(const BathSpec& bath, double omega_max, double tau) {
  return -band_integral([&](double w) { return kernels::drude_weight(w, bath) * w * std::sin(w * tau); },
                        omega_max, std::abs(tau));
}

double alpha_R_band_limited(const BathSpec& bath, double omega_max, double tau) {
  const double beta_half = bath.hbar() / (2.0 * bath.kT());
  return band_integral(
      [&](double w) {
        // w coth(beta_half w) -> 1/beta_half as w -> 0
        const double wc = w > 1e-300 ? w * coth(beta_half * w) : 1.0 / beta_half;
        return kernels::drude_weight(w, bath) * wc * std::cos(w * tau);
      },
      omega_max, std::abs(tau));
}

Comparison compare(const ModeEnsemble& ens, Kernel kernel, Reference ref, double tau_min, double tau_max,
                   std::size_t n_points) {
  if (n_points < 2 || !(tau_max > tau_min)) throw DomainError("need n_points >= 2 and tau_max > tau_min");
  if (tau_min < 0.0) throw DomainError("tau must be non-negative");
  if (kernel == Kernel::AlphaR && tau_min <= 0.0 && ref == Reference::Continuum) {
    throw DomainError("alpha_R diverges at tau = 0");
  }
  const BathSpec& bath = ens.bath;
  const double wmax = ens.omega_max;
  Comparison out;
  double max_diff = 0.0, max_ref = 0.0;
  for (std::size_t k = 0; k < n_points; ++k) {
    const double tau = tau_min + (tau_max - tau_min) * static_cast<double>(k) / static_cast<double>(n_points - 1);
    ComparisonRow row;
    row.tau = tau;
    switch (kernel) {
      case Kernel::Friction:
        row.discrete = friction_kernel_discrete(ens, tau);
        row.continuum = ref == Reference::Continuum ? friction_kernel_continuum(bath, tau)
                                                    : friction_kernel_band_limited(bath, wmax, tau);
        break;
      case Kernel::AlphaI:
        row.discrete = alpha_I_discrete(ens, tau);
        row.continuum = ref == Reference::Continuum ? kernels::alpha_I(tau, bath).value
                                                    : alpha_I_band_limited(bath, wmax, tau);
        break;
      case Kernel::AlphaR:
        row.discrete = alpha_R_discrete(ens, tau);
        row.continuum = ref == Reference::Continuum ? kernels::alpha_R_series(tau, bath).value
                                                    : alpha_R_band_limited(bath, wmax, tau);
        break;
    }
    const double diff = std::abs(row.discrete - row.continuum);
    row.rel_error = row.continuum != 0.0 ? diff / std::abs(row.continuum) : diff;
    max_diff = std::max(max_diff, diff);
    max_ref = std::max(max_ref, std::abs(row.continuum));
    out.rows.push_back(row);
  }
  out.linf_rel_error = max_ref > 0.0 ? max_diff / max_ref : max_diff;
  return out;
}

}  // namespace qbm::microbath
