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

#include "core/meq_grid.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

namespace qbm::grid {

namespace {

constexpr std::size_t kMinPoints = 9;
constexpr double kStencilBound1 = 1.3722;    // max |symbol| of the 4th-order d/dx, times h
constexpr double kStencilBound2 = 16.0 / 3;  // same for d^2/dx^2, times h^2
constexpr double kRk4Radius = 2.78;
constexpr double kSafety = 0.2;
constexpr double kBoundaryTol = 1e-6;

// d/dr along one contiguous row; zero at both ends.
void derive_row(const cplx* f, cplx* out, std::size_t m, double scale) {
  out[0] = 0.0;
  out[m - 1] = 0.0;
  out[1] = scale * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
  for (std::size_t j = 2; j + 2 < m; ++j) {
    out[j] = scale * (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]);
  }
  out[m - 2] = scale * (3.0 * f[m - 1] + 10.0 * f[m - 2] - 18.0 * f[m - 3] + 6.0 * f[m - 4] - f[m - 5]);
}

bool all_finite(std::span<const cplx> v) {
  double acc = 0.0;
  for (const auto& z : v) acc += z.real() * 0.0 + z.imag() * 0.0;  // NaN/Inf propagate
  return acc == 0.0;
}

// little-endian I/O helpers
template <class T>
void put_le(std::ostream& os, T value) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits;
  std::memcpy(&bits, &value, 8);
  unsigned char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>((bits >> (8 * k)) & 0xffU);
  os.write(reinterpret_cast<const char*>(b), 8);
}

template <class T>
T get_le(std::istream& is) {
  static_assert(sizeof(T) == 8);
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw DomainError("truncated density snapshot");
  std::uint64_t bits = 0;
  for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(b[k]) << (8 * k);
  T value;
  std::memcpy(&value, &bits, 8);
  return value;
}

constexpr char kMagic[8] = {'Q', 'B', 'M', 'R', 'H', 'O', '0', '1'};

}  // namespace

void GridShape::validate() const {
  if (n_center < kMinPoints || n_relative < kMinPoints) {
    throw DomainError("grid needs at least 9 points per axis");
  }
  if (n_relative % 2 == 0) throw DomainError("n_relative must be odd so that r = 0 is on the grid");
  if (!(half_width_center > 0.0) || !(half_width_relative > 0.0) || !std::isfinite(half_width_center) ||
      !std::isfinite(half_width_relative)) {
    throw DomainError("grid half widths must be positive and finite");
  }
}

DensityGrid::DensityGrid(const GridShape& shape, double t) : shape_(shape), t_(t) {
  shape_.validate();
  hc_ = shape_.h_center();
  hr_ = shape_.h_relative();
  data_.assign(shape_.n_center * shape_.n_relative, cplx{});
}

double DensityGrid::trace() const {
  const std::size_t c = diagonal_column();
  double s = 0.0;
  for (std::size_t i = 0; i < n_center(); ++i) s += at(i, c).real();
  return hc_ * s;
}

double DensityGrid::hermiticity_deviation() const {
  const std::size_t m = n_relative();
  double dev = 0.0;
  for (std::size_t i = 0; i < n_center(); ++i) {
    for (std::size_t j = 0; j <= m / 2; ++j) {
      dev = std::max(dev, std::norm(at(i, j) - std::conj(at(i, m - 1 - j))));
    }
  }
  return std::sqrt(dev);
}

double DensityGrid::symmetrize() {
  const std::size_t m = n_relative();
  double dev2 = 0.0;
  for (std::size_t i = 0; i < n_center(); ++i) {
    cplx* row = &at(i, 0);
    for (std::size_t j = 0; j < m / 2; ++j) {
      const cplx a = row[j];
      const cplx b = std::conj(row[m - 1 - j]);
      dev2 = std::max(dev2, std::norm(a - b));
      const cplx avg = 0.5 * (a + b);
      row[j] = avg;
      row[m - 1 - j] = std::conj(avg);
    }
    cplx& d = row[m / 2];
    dev2 = std::max(dev2, 4.0 * d.imag() * d.imag());
    d = {d.real(), 0.0};
  }
  return std::sqrt(dev2);
}

double DensityGrid::min_diagonal() const {
  const std::size_t c = diagonal_column();
  double lo = 0.0;
  for (std::size_t i = 0; i < n_center(); ++i) lo = std::min(lo, at(i, c).real());
  return lo;
}

double DensityGrid::purity() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  const double tr = trace();
  return hc_ * hr_ * s / (tr * tr);
}

DensityGrid gaussian_pure_state(double q0, double p0, double sigma0, const GridShape& shape, double hbar) {
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) throw DomainError("sigma0 must be positive");
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  if (!std::isfinite(q0) || !std::isfinite(p0)) throw DomainError("q0 and p0 must be finite");
  shape.validate();
  if (shape.half_width_center < 8.0 * sigma0 + std::abs(q0)) {
    throw DomainError("grid too small: centre half width must be at least 8*sigma0 + |q0|");
  }
  if (shape.half_width_relative < 8.0 * sigma0) {
    throw DomainError("grid too small: relative half width must be at least 8*sigma0");
  }
  if (shape.h_center() > sigma0 || shape.h_relative() > 2.0 * sigma0) {
    throw DomainError("grid too coarse for sigma0: need h_center <= sigma0 and h_relative <= 2*sigma0");
  }

  DensityGrid rho(shape);
  const std::size_t n = rho.n_center();
  const std::size_t m = rho.n_relative();
  const double a = 1.0 / (2.0 * sigma0 * sigma0);
  const double b = 1.0 / (8.0 * sigma0 * sigma0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double R = rho.center(i) - q0;
    const double gR = std::exp(-a * R * R);
    for (std::size_t j = 1; j + 1 < m; ++j) {
      const double r = rho.relative(j);
      rho.at(i, j) = gR * std::exp(-b * r * r) * std::polar(1.0, p0 * r / hbar);
    }
  }
  const double tr = rho.trace();
  for (auto& z : rho.data()) z /= tr;
  return rho;
}

Observables observables(const DensityGrid& rho, double hbar) {
  Observables o;
  o.t = rho.time();
  const std::size_t n = rho.n_center();
  const std::size_t m = rho.n_relative();
  const std::size_t c = rho.diagonal_column();
  const double hc = rho.h_center();
  const double hr = rho.h_relative();
  const double Lc = rho.shape().half_width_center;
  const double Lr = rho.shape().half_width_relative;

  double s0 = 0.0, s1 = 0.0, s2 = 0.0, sp = 0.0, spp = 0.0, sqp = 0.0, abs_all = 0.0, abs_edge = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double R = rho.center(i);
    const double d = rho.at(i, c).real();
    const cplx d1 = (rho.at(i, c - 2) - 8.0 * rho.at(i, c - 1) + 8.0 * rho.at(i, c + 1) - rho.at(i, c + 2)) /
                    (12.0 * hr);
    const cplx d2 = (-rho.at(i, c - 2) + 16.0 * rho.at(i, c - 1) - 30.0 * rho.at(i, c) +
                     16.0 * rho.at(i, c + 1) - rho.at(i, c + 2)) /
                    (12.0 * hr * hr);
    const double p_density = hbar * d1.imag();        // Re(-i hbar d_r rho)
    const double pp_density = -hbar * hbar * d2.real();  // Re(-hbar^2 d_r^2 rho)
    s0 += d;
    s1 += R * d;
    s2 += R * R * d;
    sp += p_density;
    spp += pp_density;
    sqp += R * p_density;
    abs_all += std::abs(d);
    if (std::abs(R) >= 0.95 * Lc) abs_edge += std::abs(d);
  }
  o.trace = hc * s0;
  o.mean_q = s1 / s0;
  o.mean_p = sp / s0;
  o.sigma_qq = s2 / s0 - o.mean_q * o.mean_q;
  o.sigma_pp = spp / s0 - o.mean_p * o.mean_p;
  o.sigma_qp = sqp / s0 - o.mean_q * o.mean_p;
  o.purity = rho.purity();
  o.min_diagonal = rho.min_diagonal();
  o.boundary_fraction = abs_all > 0.0 ? abs_edge / abs_all : 0.0;

  double sq_all = 0.0, sq_edge = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double w = std::norm(rho.at(i, j));
      sq_all += w;
      if (std::abs(rho.relative(j)) >= 0.95 * Lr) sq_edge += w;
    }
  }
  o.coherence_edge = sq_all > 0.0 ? sq_edge / sq_all : 0.0;
  o.boundary_warning = o.boundary_fraction >= kBoundaryTol || o.coherence_edge >= kBoundaryTol;
  return o;
}

MasterEquation::MasterEquation(const coeffs::DiffusionSet& d, const ParticleParams& p) : d_(d), p_(p) {
  p_.validate();
  if (!std::isfinite(d.D_qq) || !std::isfinite(d.D_pq) || !std::isfinite(d.D_pp)) {
    throw DomainError("diffusion constants must be finite");
  }
}

namespace {

// Row offsets and weights (times 12) of the centre-axis stencils.
struct Central {
  static constexpr int n1 = 4, n2 = 5;
  static constexpr int o1[4] = {-2, -1, 1, 2};
  static constexpr double w1[4] = {1, -8, 8, -1};
  static constexpr int o2[5] = {-2, -1, 0, 1, 2};
  static constexpr double w2[5] = {-1, 16, -30, 16, -1};
};
struct Lower {
  static constexpr int n1 = 5, n2 = 6;
  static constexpr int o1[5] = {-1, 0, 1, 2, 3};
  static constexpr double w1[5] = {-3, -10, 18, -6, 1};
  static constexpr int o2[6] = {-1, 0, 1, 2, 3, 4};
  static constexpr double w2[6] = {10, -15, -4, 14, -6, 1};
};
struct Upper {
  static constexpr int n1 = 5, n2 = 6;
  static constexpr int o1[5] = {1, 0, -1, -2, -3};
  static constexpr double w1[5] = {3, 10, -18, 6, -1};
  static constexpr int o2[6] = {1, 0, -1, -2, -3, -4};
  static constexpr double w2[6] = {10, -15, -4, 14, -6, 1};
};

struct RowCoefficients {
  double kin;   // hbar/M /(12 hc): multiplies i d_R d_r
  double damp;  // -2 gamma
  double pq;    // 2 D_pq/hbar /(12 hc): multiplies i r d_R
  double qq;    // D_qq /(12 hc^2)
  double pp;    // D_pp/hbar^2
};

// One centre row i of the right-hand side; complex values are handled as
// interleaved doubles to keep the loop free of library complex products.
template <class S>
void rhs_row(const double* in, const double* fr, double* out, std::ptrdiff_t i, std::size_t m, double r0,
             double hr, const RowCoefficients& c) {
  const auto stride = static_cast<std::ptrdiff_t>(2 * m);
  const double* a1[S::n1];
  const double* b1[S::n1];
  const double* a2[S::n2];
  for (int k = 0; k < S::n1; ++k) {
    a1[k] = in + (i + S::o1[k]) * stride;
    b1[k] = fr + (i + S::o1[k]) * stride;
  }
  for (int k = 0; k < S::n2; ++k) a2[k] = in + (i + S::o2[k]) * stride;
  const double* rho = in + i * stride;
  const double* frr = fr + i * stride;
  double* o = out + i * stride;
  o[0] = o[1] = 0.0;
  o[2 * m - 2] = o[2 * m - 1] = 0.0;
  for (std::size_t j = 1; j + 1 < m; ++j) {
    const std::size_t re = 2 * j, im = 2 * j + 1;
    double dR_re = 0, dR_im = 0, dRr_re = 0, dRr_im = 0, dRR_re = 0, dRR_im = 0;
    for (int k = 0; k < S::n1; ++k) {
      dR_re += S::w1[k] * a1[k][re];
      dR_im += S::w1[k] * a1[k][im];
      dRr_re += S::w1[k] * b1[k][re];
      dRr_im += S::w1[k] * b1[k][im];
    }
    for (int k = 0; k < S::n2; ++k) {
      dRR_re += S::w2[k] * a2[k][re];
      dRR_im += S::w2[k] * a2[k][im];
    }
    const double r = r0 + static_cast<double>(j) * hr;
    const double br = c.damp * r;
    const double pr = c.pq * r;
    const double er = c.pp * r * r;
    o[re] = -c.kin * dRr_im + br * frr[re] - pr * dR_im + c.qq * dRR_re - er * rho[re];
    o[im] = c.kin * dRr_re + br * frr[im] + pr * dR_re + c.qq * dRR_im - er * rho[im];
  }
}

}  // namespace

void MasterEquation::rhs_raw(const DensityGrid& g, std::span<const cplx> in, std::span<cplx> out) const {
  const std::size_t n = g.n_center();
  const std::size_t m = g.n_relative();
  const double hc = g.h_center();
  const double hr = g.h_relative();
  const double hbar = p_.scales.hbar;

  scratch_.resize(n * m);
  const double sr = 1.0 / (12.0 * hr);
  for (std::size_t i = 0; i < n; ++i) derive_row(&in[i * m], &scratch_[i * m], m, sr);

  const RowCoefficients c{hbar / p_.M / (12.0 * hc), -2.0 * p_.gamma, 2.0 * d_.D_pq / hbar / (12.0 * hc),
                          d_.D_qq / (12.0 * hc * hc), d_.D_pp / (hbar * hbar)};
  const auto* pin = reinterpret_cast<const double*>(in.data());
  const auto* pfr = reinterpret_cast<const double*>(scratch_.data());
  auto* pout = reinterpret_cast<double*>(out.data());
  const double r0 = g.relative(0);

  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(m), cplx{});
  std::fill(out.end() - static_cast<std::ptrdiff_t>(m), out.end(), cplx{});
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const auto ii = static_cast<std::ptrdiff_t>(i);
    if (i == 1) {
      rhs_row<Lower>(pin, pfr, pout, ii, m, r0, hr, c);
    } else if (i == n - 2) {
      rhs_row<Upper>(pin, pfr, pout, ii, m, r0, hr, c);
    } else {
      rhs_row<Central>(pin, pfr, pout, ii, m, r0, hr, c);
    }
  }
}

void MasterEquation::rhs(const DensityGrid& rho, std::span<cplx> out) const {
  if (out.size() != rho.data().size()) throw DomainError("rhs output has the wrong size");
  rhs_raw(rho, rho.data(), out);
}

DensityGrid MasterEquation::rhs(const DensityGrid& rho) const {
  DensityGrid out(rho.shape(), rho.time());
  rhs(rho, out.data());
  return out;
}

double MasterEquation::max_stable_dt(const GridShape& shape) const {
  shape.validate();
  const double hc = shape.h_center();
  const double hr = shape.h_relative();
  const double Lr = shape.half_width_relative;
  const double hbar = p_.scales.hbar;
  const double rate = hbar / p_.M * (kStencilBound1 / hc) * (kStencilBound1 / hr) +
                      2.0 * p_.gamma * Lr * kStencilBound1 / hr +
                      2.0 * std::abs(d_.D_pq) / hbar * Lr * kStencilBound1 / hc +
                      std::abs(d_.D_qq) * kStencilBound2 / (hc * hc) +
                      std::abs(d_.D_pp) * Lr * Lr / (hbar * hbar);
  return kSafety * kRk4Radius / rate;
}

StepReport MasterEquation::step(DensityGrid& rho, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("time step must be positive");
  const std::size_t size = rho.data().size();
  for (auto* v : {&k1_, &k2_, &k3_, &k4_, &stage_}) v->resize(size);
  StepReport rep;
  rep.trace_before = rho.trace();

  const auto y = rho.data();
  rhs_raw(rho, y, k1_);
  for (std::size_t k = 0; k < size; ++k) stage_[k] = y[k] + 0.5 * dt * k1_[k];
  rhs_raw(rho, stage_, k2_);
  for (std::size_t k = 0; k < size; ++k) stage_[k] = y[k] + 0.5 * dt * k2_[k];
  rhs_raw(rho, stage_, k3_);
  for (std::size_t k = 0; k < size; ++k) stage_[k] = y[k] + dt * k3_[k];
  rhs_raw(rho, stage_, k4_);
  const double w = dt / 6.0;
  for (std::size_t k = 0; k < size; ++k) stage_[k] = y[k] + w * (k1_[k] + 2.0 * k2_[k] + 2.0 * k3_[k] + k4_[k]);

  if (!all_finite(stage_)) {
    throw IntegrationError("non-finite density matrix at t = " + std::to_string(rho.time() + dt) +
                               "; reduce dt (stable bound " + std::to_string(max_stable_dt(rho.shape())) + ")",
                           std::make_shared<const DensityGrid>(rho));
  }
  std::copy(stage_.begin(), stage_.end(), y.begin());
  rho.set_time(rho.time() + dt);
  rep.hermiticity_drift = rho.symmetrize();
  rep.trace_after = rho.trace();
  return rep;
}

DensityGrid me_rhs(const DensityGrid& rho, const coeffs::DiffusionSet& d, const ParticleParams& p) {
  return MasterEquation(d, p).rhs(rho);
}

DensityGrid step(const DensityGrid& rho, const coeffs::DiffusionSet& d, const ParticleParams& p, double dt) {
  DensityGrid out = rho;
  MasterEquation(d, p).step(out, dt);
  return out;
}

RunSummary evolve(DensityGrid& rho, const coeffs::DiffusionSet& d, const ParticleParams& p, const RunOptions& opt,
                  const std::function<void(const DensityGrid&, const Observables&)>& on_sample) {
  if (!(opt.t_end >= 0.0) || !std::isfinite(opt.t_end)) throw DomainError("t_end must be non-negative");
  if (!(opt.sample_interval > 0.0)) throw DomainError("sample_interval must be positive");
  if (opt.dt < 0.0) throw DomainError("dt must be non-negative");

  MasterEquation eq(d, p);
  RunSummary run;
  run.dt = opt.dt > 0.0 ? opt.dt : eq.max_stable_dt(rho.shape());
  const double hbar = p.scales.hbar;
  const double t0 = rho.time();
  const double t_end = t0 + opt.t_end;
  const double tr0 = rho.trace();

  auto sample = [&] {
    Observables o = observables(rho, hbar);
    if (on_sample) on_sample(rho, o);
    run.samples.push_back(o);
  };
  sample();
  long k = 1;
  const double eps = 1e-12 * std::max(1.0, std::abs(t_end));
  while (rho.time() < t_end - eps) {
    const double target = std::min(t0 + static_cast<double>(k) * opt.sample_interval, t_end);
    const double span = target - rho.time();
    const auto n_sub = static_cast<long>(std::ceil(span / run.dt - 1e-9));
    const double h = span / static_cast<double>(std::max(1L, n_sub));
    for (long s = 0; s < std::max(1L, n_sub); ++s) {
      const StepReport rep = eq.step(rho, h);
      ++run.steps;
      run.max_hermiticity_drift = std::max(run.max_hermiticity_drift, rep.hermiticity_drift);
      run.max_trace_deviation = std::max(run.max_trace_deviation, std::abs(rep.trace_after - tr0) / std::abs(tr0));
    }
    rho.set_time(target);
    sample();
    ++k;
  }
  run.max_hermiticity_deviation = rho.hermiticity_deviation();
  return run;
}

void write_csv(const DensityGrid& rho, std::ostream& os) {
  const auto& s = rho.shape();
  os.precision(17);
  os << "# t=" << rho.time() << "\n"
     << "# n_center=" << s.n_center << " half_width_center=" << s.half_width_center << "\n"
     << "# n_relative=" << s.n_relative << " half_width_relative=" << s.half_width_relative << "\n"
     << "x,y,re,im\n";
  for (std::size_t i = 0; i < rho.n_center(); ++i) {
    for (std::size_t j = 0; j < rho.n_relative(); ++j) {
      const cplx z = rho.at(i, j);
      os << rho.x(i, j) << ',' << rho.y(i, j) << ',' << z.real() << ',' << z.imag() << '\n';
    }
  }
}

void write_binary(const DensityGrid& rho, std::ostream& os) {
  const auto& s = rho.shape();
  os.write(kMagic, sizeof kMagic);
  put_le<std::uint64_t>(os, s.n_center);
  put_le<std::uint64_t>(os, s.n_relative);
  put_le<double>(os, s.half_width_center);
  put_le<double>(os, s.half_width_relative);
  put_le<double>(os, rho.time());
  for (const auto& z : rho.data()) {
    put_le<double>(os, z.real());
    put_le<double>(os, z.imag());
  }
  if (!os) throw Error("failed to write density snapshot");
}

DensityGrid read_binary(std::istream& is) {
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) throw DomainError("not a density snapshot");
  GridShape s;
  const auto nc = get_le<std::uint64_t>(is);
  const auto nr = get_le<std::uint64_t>(is);
  constexpr std::uint64_t kMaxAxis = 1U << 16;
  if (nc > kMaxAxis || nr > kMaxAxis) throw DomainError("density snapshot dimensions out of range");
  s.n_center = static_cast<std::size_t>(nc);
  s.n_relative = static_cast<std::size_t>(nr);
  s.half_width_center = get_le<double>(is);
  s.half_width_relative = get_le<double>(is);
  const double t = get_le<double>(is);
  DensityGrid rho(s, t);
  for (auto& z : rho.data()) {
    const double re = get_le<double>(is);
    const double im = get_le<double>(is);
    z = {re, im};
  }
  return rho;
}

}  // namespace qbm::grid
