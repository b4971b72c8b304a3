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

// Acceptance runner. `qbm_acceptance [N ...]` checks the listed criteria
// (all of them by default), prints one line per criterion and exits non-zero
// when any of them fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "core/action.hpp"
#include "core/bath.hpp"
#include "core/coefficients.hpp"
#include "core/errors.hpp"
#include "core/kernels.hpp"
#include "core/langevin.hpp"
#include "core/meq_grid.hpp"
#include "core/microbath.hpp"
#include "core/moments.hpp"

namespace {

using namespace qbm;

struct Verdict {
  bool pass{false};
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const ParticleParams kNatural{};

// Delta / (hbar gamma)^2 at theta = 1e6 against 1/12.
Verdict criterion_1() {
  const auto d = coeffs::diffusion_constants_theta(1e6, kNatural);
  const double e = rel(d.Delta, 1.0 / 12.0);
  return {e <= 1e-6, fmt("Delta/(hbar gamma)^2 = %.12f, rel err %.2e (tol 1e-6)", d.Delta, e)};
}

// Bisection root against a secant iteration on the reduced form written out here.
Verdict criterion_2() {
  const auto c = coeffs::critical_temperature(kNatural);
  auto f = [](double theta) {
    const double u = 0.5 / theta;
    return (u * std::cosh(u) / std::sinh(u) - 1.0) / (u * u) - 0.25;
  };
  double a = 0.15, b = 0.3;
  for (int k = 0; k < 100 && std::abs(b - a) > 1e-15; ++k) {
    const double s = b - f(b) * (b - a) / (f(b) - f(a));
    a = b;
    b = s;
  }
  const bool in_band = c.theta0 >= 0.19 && c.theta0 <= 0.22;
  const bool confirmed = std::abs(c.theta0 - b) <= 1e-9;
  const bool pinned = std::abs(c.theta0 - 0.208) <= 1e-3;
  return {in_band && confirmed && pinned,
          fmt("theta0 = %.12f in [0.19, 0.22]: %s; secant %.12f; |theta0 - 0.208| = %.1e (tol 1e-3)", c.theta0,
              in_band ? "yes" : "no", b, std::abs(c.theta0 - 0.208))};
}

// Extrapolated zero-temperature constants against the coth -> 1 values.
Verdict criterion_3() {
  double worst = 0.0;
  double raw = 0.0;
  for (const ParticleParams p : {kNatural, ParticleParams{2.5, 0.4, {1.3, 0.7}}}) {
    const double hbar = p.scales.hbar;
    const auto z = coeffs::zero_temperature_limits(p, 1e-4);
    const double want[] = {hbar / p.M, 2.0 * hbar * p.gamma, 4.0 * p.M * hbar * p.gamma * p.gamma,
                           -0.25 * hbar * hbar * p.gamma * p.gamma};
    const double got[] = {z.D_qq, z.D_pq, z.D_pp, z.Delta};
    for (int k = 0; k < 4; ++k) worst = std::max(worst, rel(got[k], want[k]));
    // the plain finite-temperature values at the probe, for the record
    const auto d = coeffs::diffusion_constants_theta(1e-4, p);
    const double at_probe[] = {d.D_qq, d.D_pq, d.D_pp, d.Delta};
    for (int k = 0; k < 4; ++k) raw = std::max(raw, rel(at_probe[k], want[k]));
  }
  return {worst <= 1e-4, fmt("max rel err of the limits %.2e (tol 1e-4); unextrapolated theta = 1e-4 values: %.2e",
                             worst, raw)};
}

Verdict criterion_4() {
  double worst = 0.0;
  for (double chi : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const auto bath = BathSpec::from_chi(chi, 20.0, kNatural);
    for (double x : {0.5, 1.0, 2.0, 5.0}) {
      const double tau = x / bath.omega_c();
      const double s = kernels::alpha_R_series(tau, bath).value;
      const double q = kernels::alpha_R_quadrature(tau, bath, 1e-10).value;
      worst = std::max(worst, rel(s, q));
    }
  }
  return {worst <= 1e-5, fmt("max series/quadrature rel diff over 20 points %.2e (tol 1e-5)", worst)};
}

Verdict criterion_5() {
  bool ok = true;
  std::string detail;
  for (double chi : {0.5, 1.0, 2.0, 3.0}) {
    const auto bath = BathSpec::from_chi(chi, 20.0, kNatural);
    const auto r = action::resummation_check(bath, 400);
    ok = ok && r.passed();
    detail += fmt("chi=%g: %s; ", chi, r.passed() ? fmt("L=%d", *r.converged_at).c_str() : "no convergence");
  }
  bool raised = false;
  try {
    action::resummation_check(BathSpec::from_chi(3.5, 20.0, kNatural));
  } catch (const DomainError&) {
    raised = true;
  }
  detail += fmt("chi=3.5 domain error: %s", raised ? "raised" : "missing");
  return {ok && raised, detail};
}

// Initial packet and grid extents from the predicted moments.
Verdict grid_vs_moments(double theta, double& worst, std::string& detail) {
  const double q0 = 0.5, p0 = 0.3, sigma0 = 1.0, t_end = 5.0;
  const auto d = coeffs::diffusion_constants_theta(theta, kNatural);
  const auto m0 = moments::minimum_uncertainty(q0, p0, sigma0, 1.0);
  const auto tr = moments::evolve(m0, d, kNatural, t_end, 1e-3, 100);

  double reach = 0.0, spp_min = std::numeric_limits<double>::infinity();
  for (const auto& m : tr.samples) {
    reach = std::max(reach, std::abs(m.mq) + 6.0 * std::sqrt(m.sqq));
    spp_min = std::min(spp_min, m.spp);
  }
  const grid::GridShape shape{257, std::max(8.0 * sigma0 + std::abs(q0), reach), 257,
                              std::max(8.0 * sigma0, 4.0 / std::sqrt(spp_min))};
  auto rho = grid::gaussian_pure_state(q0, p0, sigma0, shape);
  const auto run = grid::evolve(rho, d, kNatural, {t_end, 0.0, 0.1});

  worst = 0.0;
  bool boundary = false;
  for (std::size_t k = 0; k < run.samples.size(); ++k) {
    const auto& o = run.samples[k];
    const auto& m = tr.samples.at(k);
    worst = std::max({worst, rel(o.sigma_qq, m.sqq), rel(o.sigma_pp, m.spp),
                      std::abs(o.sigma_qp - m.sqp) / std::sqrt(m.sqq * m.spp)});
    boundary = boundary || o.boundary_warning;
  }
  const bool ok = worst <= 1e-3 && run.max_trace_deviation <= 1e-6 && run.max_hermiticity_deviation <= 1e-10 &&
                  run.samples.size() == tr.samples.size();
  detail += fmt("theta=%g [%zux%zu, L=(%.1f, %.1f), %ld steps]: max rel %.2e, trace drift %.1e, herm %.1e "
                "(%.1e per step before symmetrization)%s; ",
                theta, shape.n_center, shape.n_relative, shape.half_width_center, shape.half_width_relative,
                run.steps, worst, run.max_trace_deviation, run.max_hermiticity_deviation, run.max_hermiticity_drift,
                boundary ? " (boundary warning)" : "");
  return {ok, ""};
}

Verdict criterion_6() {
  bool ok = true;
  std::string detail;
  for (double theta : {0.5, 1.0, 10.0}) {
    double worst = 0.0;
    ok = grid_vs_moments(theta, worst, detail).pass && ok;
  }
  detail += "tol 1e-3 / 1e-6 / 1e-10";
  return {ok, detail};
}

Verdict criterion_7() {
  const auto bath = BathSpec::from_theta(100.0, 20.0, kNatural);
  const auto d = coeffs::diffusion_constants(bath);
  const double mkt = bath.M() * bath.kB() * bath.T();

  // master-equation side: covariance flow integrated to late times
  const auto tr = moments::evolve(moments::minimum_uncertainty(0.0, 0.0, 1.0, 1.0), d, kNatural, 20.0, 1e-3, 1000);
  const auto& a = tr.samples[tr.samples.size() - 2];
  const auto& b = tr.samples.back();
  const double me_spp = b.spp;
  const double me_slope = (b.sqq - a.sqq) / (b.t - a.t);

  const auto map = langevin::correspondence_map(bath, 100000, 0x5eed);
  const auto lr = langevin::simulate(map.config);
  const double e_spp = rel(me_spp, mkt);
  const double e_p2 = std::abs(lr.stationary_p2 - mkt) / mkt;
  const double tol_p2 = 0.01 + 2.0 * lr.stationary_p2_se / mkt;
  const double e_slope = rel(me_slope, lr.msd_slope);
  const bool ok = e_spp <= 0.02 && e_p2 <= tol_p2 && e_slope <= 0.03;
  return {ok, fmt("ME sigma_pp/MkT = %.5f (tol 2%%); Langevin <p^2>/MkT = %.5f +- %.5f, dev %.2e (tol %.2e); "
                  "ME slope %.3f vs Langevin %.3f +- %.3f, rel %.2e (tol 3%%)",
                  me_spp / mkt, lr.stationary_p2 / mkt, lr.stationary_p2_se / mkt, e_p2, tol_p2, me_slope,
                  lr.msd_slope, lr.msd_slope_se, e_slope)};
}

Verdict criterion_8() {
  const auto hot = coeffs::diffusion_constants_theta(1.0, kNatural);
  const auto scan_hot = moments::squeeze_scan(hot, kNatural, {});
  double worst = scan_hot.min_excess;
  for (double s : {0.1, 0.3, 1.0, 3.0, 10.0}) {
    const auto tr = moments::evolve(moments::minimum_uncertainty(0.0, 0.0, s, 1.0), hot, kNatural, 5.0, 1e-3);
    worst = std::min(worst, tr.min_uncertainty_product - 0.25);
  }
  const auto cold = coeffs::diffusion_constants_theta(0.05, kNatural);
  const auto scan_cold = moments::squeeze_scan(cold, kNatural, {});
  const bool ok = worst >= -1e-9 && scan_cold.violating_states >= 1;
  return {ok, fmt("theta=1: %d states, min(product - 1/4) = %.3e (tol -1e-9); theta=0.05: %d of %d states violate, "
                  "deepest %.3e at ratio %.3g angle %.3f t %.2f",
                  scan_hot.states_scanned + 5, worst, scan_cold.violating_states, scan_cold.states_scanned,
                  scan_cold.min_excess, scan_cold.best_ratio, scan_cold.best_angle, scan_cold.best_time)};
}

Verdict criterion_9() {
  const BathSpec bath(1.0, 1.0, 1.0, 1.0);
  const std::vector<std::size_t> counts{16, 32, 64, 128, 256, 512, 1024, 2048, 4096, 10000};
  std::vector<double> err;
  for (auto n : counts) {
    const auto e = microbath::sample_drude(bath, n, 50.0);
    err.push_back(microbath::compare(e, microbath::Kernel::Friction, microbath::Reference::Continuum, 0.0, 5.0, 501)
                      .linf_rel_error);
  }
  bool monotone = true;
  for (std::size_t k = 1; k < err.size(); ++k) monotone = monotone && err[k] <= err[k - 1] * (1.0 + 1e-12);
  const auto big = microbath::sample_drude(bath, 10000, 50.0);
  const double band =
      microbath::compare(big, microbath::Kernel::Friction, microbath::Reference::BandLimited, 0.0, 5.0, 501)
          .linf_rel_error;
  return {err.back() <= 0.01 && monotone,
          fmt("Linf rel err at 1e4 modes %.4f (tol 0.01), monotone in n: %s (%.3f at 16 .. %.4f at 1e4); "
              "tail mass above 50 wc %.4f; vs the band-limited kernel %.1e",
              err.back(), monotone ? "yes" : "no", err.front(), err.back(),
              microbath::cutoff_tail_mass(bath, 50.0), band)};
}

// Only the leading high-temperature orders are checked; the next D_pp
// coefficient is reported, not judged.
Verdict criterion_10() {
  double worst = 0.0;
  double pp_coeff = 0.0;
  for (double theta : {1e2, 1e3, 1e4}) {
    const auto d = coeffs::diffusion_constants_theta(theta, kNatural);
    const auto h = coeffs::high_t_expansion(theta, kNatural);
    worst = std::max({worst, rel(d.D_qq, h.D_qq_leading) * theta, rel(d.D_pq, h.D_pq_leading) * theta,
                      rel(d.D_pp, h.D_pp_leading) * theta});
    if (theta == 1e2) pp_coeff = (d.D_pp / h.D_pp_leading - 1.0) * theta * theta;
  }
  return {worst <= 1e-2, fmt("leading orders: theta * max rel deviation %.1e (tol 1e-2); next D_pp coefficient "
                             "%.6f, excluded from acceptance",
                             worst, pp_coeff)};
}

struct Criterion {
  std::function<Verdict()> run;
  double budget_s;  // <= 0: no runtime bound
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {criterion_1, 1e-3}, {criterion_2, 1e-2}, {criterion_3, 1e-3}, {criterion_4, 10.0},   {criterion_5, 1.0},
      {criterion_6, 0.0},  {criterion_7, 120.0}, {criterion_8, 0.0}, {criterion_9, 30.0}, {criterion_10, 0.0}};
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty()) {
    for (int i = 1; i <= static_cast<int>(all.size()); ++i) which.push_back(i);
  }

  int failures = 0;
  for (int n : which) {
    if (n < 1 || n > static_cast<int>(all.size())) {
      std::fprintf(stderr, "no criterion %d\n", n);
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = all[n - 1].run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double budget = all[n - 1].budget_s;
    const bool in_time = budget <= 0.0 || secs <= budget;
    const bool pass = v.pass && in_time;
    failures += !pass;
    std::printf("criterion %d: %s  %s  [%.3g s%s]\n", n, pass ? "PASS" : "FAIL", v.detail.c_str(), secs,
                budget > 0.0 ? fmt(", budget %g s%s", budget, in_time ? "" : " exceeded").c_str() : "");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
