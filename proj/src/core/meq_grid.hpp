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
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "core/bath.hpp"
#include "core/coefficients.hpp"
#include "core/errors.hpp"

namespace qbm::grid {

using cplx = std::complex<double>;

/// Sampling lattice of rho(x, y) in centre/relative coordinates
///   R = (x + y)/2,  r = x - y,
/// R_i = -Lc + i*hc (i < n_center), r_j = -Lr + j*hr (j < n_relative).
/// n_relative is odd so that the diagonal r = 0 is a lattice line.
struct GridShape {
  std::size_t n_center{257};
  double half_width_center{10.0};
  std::size_t n_relative{257};
  double half_width_relative{8.0};

  double h_center() const noexcept { return 2.0 * half_width_center / static_cast<double>(n_center - 1); }
  double h_relative() const noexcept { return 2.0 * half_width_relative / static_cast<double>(n_relative - 1); }
  void validate() const;
};

/// Complex density matrix rho(x, y) sampled on a GridShape, plus its time.
/// Stored row-major with the centre index outermost.
class DensityGrid {
 public:
  explicit DensityGrid(const GridShape& shape, double t = 0.0);

  const GridShape& shape() const noexcept { return shape_; }
  std::size_t n_center() const noexcept { return shape_.n_center; }
  std::size_t n_relative() const noexcept { return shape_.n_relative; }
  double h_center() const noexcept { return hc_; }
  double h_relative() const noexcept { return hr_; }
  std::size_t diagonal_column() const noexcept { return shape_.n_relative / 2; }

  double center(std::size_t i) const noexcept { return -shape_.half_width_center + static_cast<double>(i) * hc_; }
  double relative(std::size_t j) const noexcept {
    // exact zero on the diagonal column
    const auto c = static_cast<double>(diagonal_column());
    return (static_cast<double>(j) - c) * hr_;
  }
  double x(std::size_t i, std::size_t j) const noexcept { return center(i) + 0.5 * relative(j); }
  double y(std::size_t i, std::size_t j) const noexcept { return center(i) - 0.5 * relative(j); }

  cplx& at(std::size_t i, std::size_t j) noexcept { return data_[i * shape_.n_relative + j]; }
  const cplx& at(std::size_t i, std::size_t j) const noexcept { return data_[i * shape_.n_relative + j]; }
  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  double time() const noexcept { return t_; }
  void set_time(double t) noexcept { t_ = t; }

  /// h_c * sum_i Re rho(R_i, 0).
  double trace() const;
  /// max |rho(R, r) - conj rho(R, -r)|.
  double hermiticity_deviation() const;
  /// Replaces rho by (rho + rho^dagger)/2, which makes the diagonal real.
  /// Returns the deviation found before the update.
  double symmetrize();
  /// Most negative diagonal value (0 if none); a positivity diagnostic.
  double min_diagonal() const;
  /// Tr rho^2 / (Tr rho)^2 (the centre/relative map has unit Jacobian).
  double purity() const;

 private:
  GridShape shape_;
  double hc_;
  double hr_;
  double t_;
  std::vector<cplx> data_;
};

/// rho = psi psi^* for a normalized Gaussian packet of position width sigma0
/// centred at q0 with mean momentum p0. Requires both half widths to be at
/// least 8 sigma0 (centre axis: 8 sigma0 + |q0|) and spacings no coarser than
/// sigma0 (centre) and 2 sigma0 (relative).
DensityGrid gaussian_pure_state(double q0, double p0, double sigma0, const GridShape& shape,
                                double hbar = 1.0);

/// Moments and diagnostics extracted from a grid. Momentum moments use
/// 4th-order derivatives across the diagonal (along r at r = 0).
struct Observables {
  double t{0.0};
  double trace{0.0};
  double mean_q{0.0};
  double mean_p{0.0};
  double sigma_qq{0.0};
  double sigma_pp{0.0};
  double sigma_qp{0.0};
  double purity{0.0};
  double min_diagonal{0.0};
  double boundary_fraction{0.0};   ///< diagonal weight with |R| >= 0.95 Lc
  double coherence_edge{0.0};      ///< share of sum |rho|^2 with |r| >= 0.95 Lr
  bool boundary_warning{false};    ///< either fraction >= 1e-6

  double uncertainty_product() const noexcept { return sigma_qq * sigma_pp - sigma_qp * sigma_qp; }
};

Observables observables(const DensityGrid& rho, double hbar = 1.0);

/// Raised when a step produces non-finite values. Holds the last finite state.
class IntegrationError : public NumericalError {
 public:
  IntegrationError(const std::string& what, std::shared_ptr<const DensityGrid> last_good)
      : NumericalError(what), last_good_(std::move(last_good)) {}
  const DensityGrid& last_good() const noexcept { return *last_good_; }

 private:
  std::shared_ptr<const DensityGrid> last_good_;
};

struct StepReport {
  double trace_before{0.0};
  double trace_after{0.0};
  double hermiticity_drift{0.0};  ///< before re-symmetrization
};

/// The master equation in centre/relative coordinates,
///   d rho/dt = (i hbar/M) d_R d_r rho - 2 gamma r d_r rho
///            + (2i/hbar) D_pq r d_R rho + D_qq d_R^2 rho - (D_pp/hbar^2) r^2 rho,
/// which is the (x, y) form with d_x - d_y = 2 d_r, d_x + d_y = d_R and
/// d_x^2 - d_y^2 = 2 d_R d_r. 4th-order central differences inside, 4th-order
/// one-sided stencils on the ring next to the boundary, and rho = 0 on the
/// outermost ring.
class MasterEquation {
 public:
  MasterEquation(const coeffs::DiffusionSet& d, const ParticleParams& p);

  /// Writes d rho/dt into `out` (size n_center * n_relative).
  void rhs(const DensityGrid& rho, std::span<cplx> out) const;
  DensityGrid rhs(const DensityGrid& rho) const;

  /// Largest explicit RK4 step: 0.2 of the RK4 stability radius divided by
  /// the sum of the per-term rate bounds (kinetic, damping, D_pq, D_qq, D_pp).
  double max_stable_dt(const GridShape& shape) const;

  /// One classic RK4 step followed by Hermitian symmetrization. Throws
  /// IntegrationError (carrying the pre-step state) on non-finite output.
  StepReport step(DensityGrid& rho, double dt);

  const coeffs::DiffusionSet& diffusion() const noexcept { return d_; }
  const ParticleParams& particle() const noexcept { return p_; }

 private:
  void rhs_raw(const DensityGrid& shape_ref, std::span<const cplx> in, std::span<cplx> out) const;

  coeffs::DiffusionSet d_;
  ParticleParams p_;
  mutable std::vector<cplx> scratch_;
  std::vector<cplx> k1_, k2_, k3_, k4_, stage_;
};

DensityGrid me_rhs(const DensityGrid& rho, const coeffs::DiffusionSet& d, const ParticleParams& p);
DensityGrid step(const DensityGrid& rho, const coeffs::DiffusionSet& d, const ParticleParams& p,
                 double dt);

struct RunOptions {
  double t_end{5.0};
  double dt{0.0};               ///< 0: use max_stable_dt
  double sample_interval{0.1};  ///< observables cadence in time units
};

struct RunSummary {
  std::vector<Observables> samples;
  double dt{0.0};
  long steps{0};
  double max_trace_deviation{0.0};        ///< max |Tr rho - Tr rho(0)| / Tr rho(0)
  double max_hermiticity_drift{0.0};      ///< before symmetrization
  double max_hermiticity_deviation{0.0};  ///< after symmetrization
};

/// Integrates rho in place until t_end, sampling observables at t0, every
/// sample_interval and at t_end. `on_sample` (optional) sees each sampled
/// snapshot.
RunSummary evolve(DensityGrid& rho, const coeffs::DiffusionSet& d, const ParticleParams& p,
                  const RunOptions& opt,
                  const std::function<void(const DensityGrid&, const Observables&)>& on_sample = {});

/// Snapshot export: CSV rows "x,y,re,im" after '#' metadata lines.
void write_csv(const DensityGrid& rho, std::ostream& os);
/// Binary dump: 8-byte magic "QBMRHO01", u64 n_center, u64 n_relative,
/// f64 half_width_center, f64 half_width_relative, f64 t, then row-major
/// (re, im) pairs; all little-endian.
void write_binary(const DensityGrid& rho, std::ostream& os);
DensityGrid read_binary(std::istream& is);

}  // namespace qbm::grid
