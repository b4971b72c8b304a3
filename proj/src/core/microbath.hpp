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
#include <vector>

#include "core/bath.hpp"

namespace qbm::microbath {

enum class Scheme {
  Grid,        ///< uniform cells on [0, omega_max], frequency at the midpoint
  Stratified,  ///< uniform cells, frequency drawn uniformly inside each cell
};

/// N oscillators of unit mass whose couplings reproduce the Drude weight
/// g(w) = (2 M gamma/pi) wc^2/(w^2 + wc^2):
///   C_i^2 / (m_i w_i^2) = 2 * (integral of g over cell i),
/// so that sum_i C_i^2/(m_i w_i^2) f(w_i) -> int_0^wmax (4 M gamma/pi) wc^2/(w^2+wc^2) f(w) dw.
struct ModeEnsemble {
  BathSpec bath;
  double omega_max{0.0};
  Scheme scheme{Scheme::Grid};
  std::vector<double> omegas;
  std::vector<double> masses;
  std::vector<double> couplings;

  std::size_t n_modes() const noexcept { return omegas.size(); }
  /// C_i^2 / (2 m_i w_i^2), the weight each mode carries in the kernels.
  double weight(std::size_t i) const noexcept {
    return couplings[i] * couplings[i] / (2.0 * masses[i] * omegas[i] * omegas[i]);
  }
};

/// Requires n_modes >= 16 and omega_max >= 10 wc (omega_max <= 0 selects 50 wc).
/// `seed` is only used by the stratified scheme.
ModeEnsemble sample_drude(const BathSpec& bath, std::size_t n_modes, double omega_max = 0.0,
                          Scheme scheme = Scheme::Grid, std::uint64_t seed = 0);

/// sum_i C_i^2/(2 m_i w_i^2) cos(w_i t). Tends to M gamma wc e^{-wc t}; at
/// t = 0 it equals M gamma wc (2/pi) atan(omega_max/wc) exactly.
double friction_kernel_discrete(const ModeEnsemble& ens, double t);
/// sum_i C_i^2/(2 m_i w_i) coth(hbar w_i / 2 kB T) cos(w_i tau).
double alpha_R_discrete(const ModeEnsemble& ens, double tau, double T);
double alpha_R_discrete(const ModeEnsemble& ens, double tau);  ///< at the bath temperature
/// -sum_i C_i^2/(2 m_i w_i) sin(w_i tau).
double alpha_I_discrete(const ModeEnsemble& ens, double tau);

/// pi N / omega_max: half the recurrence time of the midpoint grid. Comparisons
/// with continuum kernels are meaningful below it.
double validity_window(const ModeEnsemble& ens);

/// 1 - (2/pi) atan(omega_max/wc): weight of g beyond omega_max.
double cutoff_tail_mass(const BathSpec& bath, double omega_max);

/// Continuum friction kernel M gamma wc e^{-wc t}.
double friction_kernel_continuum(const BathSpec& bath, double t);

/// Continuum kernels with the spectral integral stopped at omega_max: the
/// N -> infinity limit of the discrete sums at fixed omega_max.
double friction_kernel_band_limited(const BathSpec& bath, double omega_max, double t);
double alpha_I_band_limited(const BathSpec& bath, double omega_max, double tau);
double alpha_R_band_limited(const BathSpec& bath, double omega_max, double tau);

enum class Kernel { Friction, AlphaR, AlphaI };
enum class Reference {
  Continuum,    ///< infinite-band closed forms (alpha_R via kernels::alpha_R_series)
  BandLimited,  ///< integrals cut at omega_max
};

struct ComparisonRow {
  double tau{0.0};
  double discrete{0.0};
  double continuum{0.0};
  double rel_error{0.0};  ///< |discrete - continuum| / |continuum|
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  /// max |discrete - continuum| / max |continuum| over the rows.
  double linf_rel_error{0.0};
};

/// Samples tau uniformly on [tau_min, tau_max] (n_points >= 2).
Comparison compare(const ModeEnsemble& ens, Kernel kernel, Reference ref, double tau_min, double tau_max,
                   std::size_t n_points);

}  // namespace qbm::microbath
