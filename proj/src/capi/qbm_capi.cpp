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

#include "qbm/qbm.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
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
#include "core/special.hpp"

#ifndef QBM_VERSION_STRING
#define QBM_VERSION_STRING "0.0.0"
#endif

struct qbm_trajectory {
  qbm::moments::Trajectory tr;
};
struct qbm_grid {
  qbm::grid::DensityGrid rho;
};
struct qbm_run {
  qbm::grid::RunSummary run;
};
struct qbm_langevin_result {
  qbm::langevin::LangevinResult res;
};
struct qbm_modes {
  qbm::microbath::ModeEnsemble ens;
};

namespace {

thread_local std::string g_last_error;

class ArgumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

qbm_status fail(qbm_status s, const char* what) {
  g_last_error = what;
  return s;
}

// Runs f, translating exceptions into status codes.
template <class F>
qbm_status guarded(F&& f) {
  try {
    f();
    return QBM_OK;
  } catch (const ArgumentError& e) {
    return fail(QBM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const qbm::ResonanceError& e) {
    return fail(QBM_ERR_RESONANCE, e.what());
  } catch (const qbm::DomainError& e) {
    return fail(QBM_ERR_DOMAIN, e.what());
  } catch (const qbm::ConvergenceError& e) {
    return fail(QBM_ERR_CONVERGENCE, e.what());
  } catch (const qbm::NumericalError& e) {
    return fail(QBM_ERR_NUMERICAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(QBM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QBM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QBM_ERR_INTERNAL, "unknown error");
  }
}

template <class... P>
void need(const P*... ptrs) {
  if (((ptrs == nullptr) || ...)) throw ArgumentError("required pointer argument is NULL");
}

qbm::ParticleParams particle(const qbm_particle* p) {
  qbm::ParticleParams out;
  out.M = p->M;
  out.gamma = p->gamma;
  out.scales = {p->hbar, p->kB};
  out.validate();
  return out;
}

qbm::BathSpec bath(const qbm_bath* b) { return {b->M, b->gamma, b->omega_c, b->T, {b->hbar, b->kB}}; }

qbm_bath to_c(const qbm::BathSpec& b) { return {b.M(), b.gamma(), b.omega_c(), b.T(), b.hbar(), b.kB()}; }

qbm_diffusion to_c(const qbm::coeffs::DiffusionSet& d) { return {d.T, d.theta, d.D_qq, d.D_pq, d.D_pp, d.Delta}; }

qbm::coeffs::DiffusionSet diffusion(const qbm_diffusion* d, const qbm::ParticleParams& p) {
  qbm::coeffs::DiffusionSet out;
  out.T = d->T;
  out.theta = d->theta;
  out.gamma = p.gamma;
  out.hbar = p.scales.hbar;
  out.D_qq = d->D_qq;
  out.D_pq = d->D_pq;
  out.D_pp = d->D_pp;
  out.Delta = d->Delta;
  return out;
}

qbm_kernel_value to_c(const qbm::kernels::KernelValue& k) {
  return {k.tau, k.value, k.terms_used, k.truncation_error_estimate};
}

qbm_moments to_c(const qbm::moments::GaussianMoments& m) { return {m.mq, m.mp, m.sqq, m.spp, m.sqp, m.t}; }

qbm::moments::GaussianMoments from_c(const qbm_moments& m) { return {m.mq, m.mp, m.sqq, m.spp, m.sqp, m.t}; }

qbm::grid::GridShape from_c(const qbm_grid_shape& s) {
  return {s.n_center, s.half_width_center, s.n_relative, s.half_width_relative};
}

qbm_observables to_c(const qbm::grid::Observables& o) {
  return {o.t,           o.trace,           o.mean_q,         o.mean_p,
          o.sigma_qq,    o.sigma_pp,        o.sigma_qp,       o.purity,
          o.min_diagonal, o.boundary_fraction, o.coherence_edge, o.boundary_warning ? 1 : 0};
}

void write_messages(const std::vector<std::string>& msgs, char* buf, size_t len, int* count) {
  if (count) *count = static_cast<int>(msgs.size());
  if (!buf || len == 0) return;
  std::string joined;
  for (const auto& m : msgs) {
    if (!joined.empty()) joined += '\n';
    joined += m;
  }
  const size_t n = std::min(joined.size(), len - 1);
  std::memcpy(buf, joined.data(), n);
  buf[n] = '\0';
}

qbm_langevin_config to_c(const qbm::langevin::LangevinConfig& c) {
  return {c.gamma_cl, c.T,  c.M,  c.kB,           c.dt,
          c.n_steps,  c.n_traj, c.seed, c.q0, c.p0, c.sample_every, c.stationary_from, c.noise_refinement};
}

qbm::langevin::LangevinConfig from_c(const qbm_langevin_config& c) {
  qbm::langevin::LangevinConfig o;
  o.gamma_cl = c.gamma_cl;
  o.T = c.T;
  o.M = c.M;
  o.kB = c.kB;
  o.dt = c.dt;
  o.n_steps = c.n_steps;
  o.n_traj = c.n_traj;
  o.seed = c.seed;
  o.q0 = c.q0;
  o.p0 = c.p0;
  o.sample_every = c.sample_every;
  o.stationary_from = c.stationary_from;
  o.noise_refinement = c.noise_refinement;
  return o;
}

}  // namespace

extern "C" {

const char* qbm_version(void) { return QBM_VERSION_STRING; }

const char* qbm_status_string(qbm_status status) {
  switch (status) {
    case QBM_OK: return "ok";
    case QBM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QBM_ERR_DOMAIN: return "domain error";
    case QBM_ERR_NUMERICAL: return "numerical failure";
    case QBM_ERR_RESONANCE: return "Matsubara resonance";
    case QBM_ERR_CONVERGENCE: return "no convergence";
    case QBM_ERR_IO: return "i/o error";
    case QBM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* qbm_last_error(void) { return g_last_error.c_str(); }

qbm_particle qbm_particle_natural(void) { return {1.0, 1.0, 1.0, 1.0}; }

qbm_status qbm_bath_from_theta(double theta, double omega_c, const qbm_particle* p, qbm_bath* out) {
  return guarded([&] {
    need(p, out);
    *out = to_c(qbm::BathSpec::from_theta(theta, omega_c, particle(p)));
  });
}

qbm_status qbm_bath_from_chi(double chi, double omega_c, const qbm_particle* p, qbm_bath* out) {
  return guarded([&] {
    need(p, out);
    *out = to_c(qbm::BathSpec::from_chi(chi, omega_c, particle(p)));
  });
}

qbm_status qbm_bath_check(const qbm_bath* b, char* buf, size_t buf_len, int* n_warnings) {
  return guarded([&] {
    need(b);
    write_messages(bath(b).warnings(), buf, buf_len, n_warnings);
  });
}

qbm_status qbm_bath_dimensionless(const qbm_bath* b, double* u, double* chi, double* theta) {
  return guarded([&] {
    need(b);
    const auto s = bath(b);
    if (u) *u = s.u();
    if (chi) *chi = s.chi();
    if (theta) *theta = s.theta();
  });
}

qbm_status qbm_diffusion_constants(const qbm_particle* p, double T, qbm_diffusion* out) {
  return guarded([&] {
    need(p, out);
    *out = to_c(qbm::coeffs::diffusion_constants(T, particle(p)));
  });
}

qbm_status qbm_diffusion_constants_theta(const qbm_particle* p, double theta, qbm_diffusion* out) {
  return guarded([&] {
    need(p, out);
    *out = to_c(qbm::coeffs::diffusion_constants_theta(theta, particle(p)));
  });
}

qbm_status qbm_zero_temperature_limits(const qbm_particle* p, double theta_probe, qbm_diffusion* out) {
  return guarded([&] {
    need(p, out);
    *out = to_c(qbm::coeffs::zero_temperature_limits(particle(p), theta_probe > 0.0 ? theta_probe : 1e-4));
  });
}

qbm_status qbm_delta_reduced(double u, double* out) {
  return guarded([&] {
    need(out);
    *out = qbm::coeffs::delta_reduced(u, 1.0, 1.0);
  });
}

qbm_status qbm_critical_temperature(const qbm_particle* p, qbm_critical* out) {
  return guarded([&] {
    need(p, out);
    const auto c = qbm::coeffs::critical_temperature(particle(p));
    *out = {c.theta0, c.T0, c.u_star, c.iterations};
  });
}

qbm_status qbm_high_t_expansion(const qbm_particle* p, double T, qbm_high_t* out) {
  return guarded([&] {
    need(p, out);
    const auto h = qbm::coeffs::high_t_expansion(T, particle(p));
    *out = {h.theta,         h.D_qq_leading,  h.D_pq_leading,  h.D_pp_leading,
            h.qq_correction, h.pq_correction, h.pp_correction, h.reliable ? 1 : 0};
  });
}

qbm_status qbm_sweep(const qbm_particle* p, double theta_min, double theta_max, int n_points, int log_spacing,
                     qbm_diffusion* out) {
  return guarded([&] {
    need(p, out);
    const auto rows = qbm::coeffs::sweep(theta_min, theta_max, n_points, log_spacing != 0, particle(p));
    for (size_t k = 0; k < rows.size(); ++k) out[k] = to_c(rows[k]);
  });
}

qbm_status qbm_drude_weight(const qbm_bath* b, double omega, double* out) {
  return guarded([&] {
    need(b, out);
    *out = qbm::kernels::drude_weight(omega, bath(b));
  });
}

qbm_status qbm_alpha_I(const qbm_bath* b, double tau, qbm_kernel_value* out) {
  return guarded([&] {
    need(b, out);
    *out = to_c(qbm::kernels::alpha_I(tau, bath(b)));
  });
}

qbm_status qbm_alpha_R_series(const qbm_bath* b, double tau, double rel_tol, qbm_kernel_value* out) {
  return guarded([&] {
    need(b, out);
    *out = to_c(qbm::kernels::alpha_R_series(tau, bath(b), rel_tol > 0.0 ? rel_tol : 1e-14));
  });
}

qbm_status qbm_alpha_R_quadrature(const qbm_bath* b, double tau, double rel_tol, int classical,
                                  qbm_kernel_value* out) {
  return guarded([&] {
    need(b, out);
    const auto factor = classical ? qbm::kernels::ThermalFactor::Classical : qbm::kernels::ThermalFactor::Quantum;
    *out = to_c(qbm::kernels::alpha_R_quadrature(tau, bath(b), rel_tol > 0.0 ? rel_tol : 1e-8, factor));
  });
}

qbm_status qbm_slowest_decay_rate(const qbm_bath* b, double* out) {
  return guarded([&] {
    need(b, out);
    *out = qbm::kernels::slowest_decay_rate(bath(b));
  });
}

qbm_status qbm_zeta_even(int m, double* out) {
  return guarded([&] {
    need(out);
    *out = qbm::special::zeta_even(m);
  });
}

qbm_status qbm_effective_action_get(const qbm_bath* b, qbm_effective_action* out) {
  return guarded([&] {
    need(b, out);
    const auto a = qbm::action::effective_action(bath(b));
    *out = {a.coeff_qminus_sq, a.alpha, a.bracket, a.gamma_over_omega_c, a.chi, a.gamma_small ? 1 : 0,
            a.chi_below_pi ? 1 : 0};
  });
}

qbm_status qbm_resummation_check(const qbm_bath* b, int max_order, double* partial_sums, double* bracket,
                                 int* converged_at) {
  return guarded([&] {
    need(b);
    const auto r = qbm::action::resummation_check(bath(b), max_order);
    if (partial_sums) std::copy(r.partial_sums.begin(), r.partial_sums.end(), partial_sums);
    if (bracket) *bracket = r.bracket;
    if (converged_at) *converged_at = r.converged_at.value_or(-1);
  });
}

qbm_status qbm_minimum_uncertainty(double q0, double p0, double sigma0, double hbar, qbm_moments* out) {
  return guarded([&] {
    need(out);
    *out = to_c(qbm::moments::minimum_uncertainty(q0, p0, sigma0, hbar));
  });
}

qbm_status qbm_squeezed_state(double ratio, double angle, const qbm_particle* p, qbm_moments* out) {
  return guarded([&] {
    need(p, out);
    *out = to_c(qbm::moments::squeezed_state(ratio, angle, particle(p)));
  });
}

qbm_status qbm_moments_evolve(const qbm_moments* m0, const qbm_diffusion* d, const qbm_particle* p, double t_end,
                              double dt, int sample_every, qbm_trajectory** out) {
  return guarded([&] {
    need(m0, d, p, out);
    *out = nullptr;
    const auto pp = particle(p);
    auto tr = qbm::moments::evolve(from_c(*m0), diffusion(d, pp), pp, t_end, dt, sample_every);
    *out = new qbm_trajectory{std::move(tr)};
  });
}

size_t qbm_trajectory_size(const qbm_trajectory* tr) { return tr ? tr->tr.samples.size() : 0; }

qbm_status qbm_trajectory_get(const qbm_trajectory* tr, size_t i, qbm_moments* out) {
  return guarded([&] {
    need(tr, out);
    if (i >= tr->tr.samples.size()) throw ArgumentError("trajectory index out of range");
    *out = to_c(tr->tr.samples[i]);
  });
}

double qbm_trajectory_min_product(const qbm_trajectory* tr) { return tr ? tr->tr.min_uncertainty_product : 0.0; }

void qbm_trajectory_free(qbm_trajectory* tr) { delete tr; }

qbm_status qbm_moments_stationary(const qbm_diffusion* d, const qbm_particle* p, qbm_stationary* out) {
  return guarded([&] {
    need(d, p, out);
    const auto pp = particle(p);
    const auto s = qbm::moments::stationary(diffusion(d, pp), pp);
    *out = {s.spp, s.sqp, s.msd_slope};
  });
}

qbm_squeeze_options qbm_squeeze_defaults(void) {
  const qbm::moments::SqueezeScanOptions o;
  return {o.n_ratios, o.ratio_min, o.ratio_max, o.n_angles, o.t_end_gamma, o.sample_gamma_dt, o.dt_gamma};
}

qbm_status qbm_squeeze_scan(const qbm_diffusion* d, const qbm_particle* p, const qbm_squeeze_options* opt,
                            qbm_squeeze_result* out) {
  return guarded([&] {
    need(d, p, out);
    qbm::moments::SqueezeScanOptions o;
    if (opt) {
      o.n_ratios = opt->n_ratios;
      o.ratio_min = opt->ratio_min;
      o.ratio_max = opt->ratio_max;
      o.n_angles = opt->n_angles;
      o.t_end_gamma = opt->t_end_gamma;
      o.sample_gamma_dt = opt->sample_gamma_dt;
      o.dt_gamma = opt->dt_gamma;
    }
    const auto pp = particle(p);
    const auto r = qbm::moments::squeeze_scan(diffusion(d, pp), pp, o);
    *out = {r.min_excess, r.best_ratio, r.best_angle, r.best_time, r.violating_states, r.states_scanned};
  });
}

qbm_status qbm_grid_gaussian(double q0, double p0, double sigma0, const qbm_grid_shape* shape, double hbar,
                             qbm_grid** out) {
  return guarded([&] {
    need(shape, out);
    *out = nullptr;
    *out = new qbm_grid{qbm::grid::gaussian_pure_state(q0, p0, sigma0, from_c(*shape), hbar)};
  });
}

void qbm_grid_free(qbm_grid* g) { delete g; }

qbm_status qbm_grid_shape_get(const qbm_grid* g, qbm_grid_shape* out) {
  return guarded([&] {
    need(g, out);
    const auto& s = g->rho.shape();
    *out = {s.n_center, s.half_width_center, s.n_relative, s.half_width_relative};
  });
}

double qbm_grid_time(const qbm_grid* g) { return g ? g->rho.time() : 0.0; }

qbm_status qbm_grid_value(const qbm_grid* g, size_t i, size_t j, double* re, double* im) {
  return guarded([&] {
    need(g);
    if (i >= g->rho.n_center() || j >= g->rho.n_relative()) throw ArgumentError("grid index out of range");
    const auto z = g->rho.at(i, j);
    if (re) *re = z.real();
    if (im) *im = z.imag();
  });
}

qbm_status qbm_grid_coordinates(const qbm_grid* g, size_t i, size_t j, double* x, double* y) {
  return guarded([&] {
    need(g);
    if (i >= g->rho.n_center() || j >= g->rho.n_relative()) throw ArgumentError("grid index out of range");
    if (x) *x = g->rho.x(i, j);
    if (y) *y = g->rho.y(i, j);
  });
}

qbm_status qbm_grid_observables(const qbm_grid* g, double hbar, qbm_observables* out) {
  return guarded([&] {
    need(g, out);
    *out = to_c(qbm::grid::observables(g->rho, hbar));
  });
}

qbm_status qbm_grid_max_stable_dt(const qbm_diffusion* d, const qbm_particle* p, const qbm_grid_shape* shape,
                                  double* out) {
  return guarded([&] {
    need(d, p, shape, out);
    const auto pp = particle(p);
    *out = qbm::grid::MasterEquation(diffusion(d, pp), pp).max_stable_dt(from_c(*shape));
  });
}

qbm_status qbm_grid_step(qbm_grid* g, const qbm_diffusion* d, const qbm_particle* p, double dt,
                         qbm_step_report* report) {
  return guarded([&] {
    need(g, d, p);
    const auto pp = particle(p);
    qbm::grid::MasterEquation eq(diffusion(d, pp), pp);
    const auto r = eq.step(g->rho, dt);
    if (report) *report = {r.trace_before, r.trace_after, r.hermiticity_drift};
  });
}

qbm_status qbm_grid_evolve(qbm_grid* g, const qbm_diffusion* d, const qbm_particle* p, const qbm_run_options* opt,
                           qbm_sample_callback cb, void* user, qbm_run** out) {
  if (out) *out = nullptr;
  // samples survive a mid-run failure
  auto partial = std::make_unique<qbm_run>();
  struct Stop {};
  const qbm_status st = guarded([&] {
    need(g, d, p, opt);
    const auto pp = particle(p);
    qbm::grid::RunOptions o{opt->t_end, opt->dt, opt->sample_interval};
    auto observer = [&](const qbm::grid::DensityGrid& rho, const qbm::grid::Observables& obs) {
      partial->run.samples.push_back(obs);
      if (cb) {
        const qbm_observables c = to_c(obs);
        // the callback sees the live grid through its handle
        (void)rho;
        if (cb(g, &c, user) != 0) throw Stop{};
      }
    };
    try {
      auto run = qbm::grid::evolve(g->rho, diffusion(d, pp), pp, o, observer);
      partial->run = std::move(run);
    } catch (const qbm::grid::IntegrationError& e) {
      g->rho = e.last_good();
      throw;
    } catch (const Stop&) {
    }
  });
  if (out && (st == QBM_OK || st == QBM_ERR_NUMERICAL)) *out = partial.release();
  return st;
}

size_t qbm_run_size(const qbm_run* run) { return run ? run->run.samples.size() : 0; }

qbm_status qbm_run_sample(const qbm_run* run, size_t i, qbm_observables* out) {
  return guarded([&] {
    need(run, out);
    if (i >= run->run.samples.size()) throw ArgumentError("sample index out of range");
    *out = to_c(run->run.samples[i]);
  });
}

qbm_status qbm_run_summary_get(const qbm_run* run, qbm_run_summary* out) {
  return guarded([&] {
    need(run, out);
    const auto& r = run->run;
    *out = {r.dt, r.steps, r.max_trace_deviation, r.max_hermiticity_drift, r.max_hermiticity_deviation};
  });
}

void qbm_run_free(qbm_run* run) { delete run; }

qbm_status qbm_grid_write_csv(const qbm_grid* g, const char* path) {
  return guarded([&] {
    need(g, path);
    std::ofstream os(path);
    if (!os) throw ArgumentError(std::string("cannot open ") + path);
    qbm::grid::write_csv(g->rho, os);
  });
}

qbm_status qbm_grid_write_binary(const qbm_grid* g, const char* path) {
  qbm_status st = guarded([&] { need(g, path); });
  if (st != QBM_OK) return st;
  std::ofstream os(path, std::ios::binary);
  if (!os) return fail(QBM_ERR_IO, (std::string("cannot open ") + path).c_str());
  return guarded([&] { qbm::grid::write_binary(g->rho, os); });
}

qbm_status qbm_grid_read_binary(const char* path, qbm_grid** out) {
  qbm_status st = guarded([&] { need(path, out); });
  if (st != QBM_OK) return st;
  *out = nullptr;
  std::ifstream is(path, std::ios::binary);
  if (!is) return fail(QBM_ERR_IO, (std::string("cannot open ") + path).c_str());
  return guarded([&] { *out = new qbm_grid{qbm::grid::read_binary(is)}; });
}

qbm_langevin_config qbm_langevin_defaults(void) { return to_c(qbm::langevin::LangevinConfig{}); }

qbm_status qbm_langevin_simulate(const qbm_langevin_config* cfg, qbm_langevin_result** out) {
  return guarded([&] {
    need(cfg, out);
    *out = nullptr;
    *out = new qbm_langevin_result{qbm::langevin::simulate(from_c(*cfg))};
  });
}

size_t qbm_langevin_size(const qbm_langevin_result* r) { return r ? r->res.samples.size() : 0; }

qbm_status qbm_langevin_sample_get(const qbm_langevin_result* r, size_t i, qbm_langevin_sample* out) {
  return guarded([&] {
    need(r, out);
    if (i >= r->res.samples.size()) throw ArgumentError("sample index out of range");
    const auto& s = r->res.samples[i];
    *out = {s.t, s.mean_p, s.mean_p_se, s.p2, s.p2_se, s.var_p, s.mean_q, s.var_q, s.msd, s.msd_se};
  });
}

qbm_status qbm_langevin_summary_get(const qbm_langevin_result* r, qbm_langevin_summary* out) {
  return guarded([&] {
    need(r, out);
    const auto& s = r->res;
    *out = {s.stationary_p2, s.stationary_p2_se, s.msd_slope, s.msd_slope_se, s.config.Gamma()};
  });
}

void qbm_langevin_free(qbm_langevin_result* r) { delete r; }

qbm_status qbm_correspondence_map(const qbm_bath* b, long n_traj, uint64_t seed, qbm_langevin_config* out,
                                  char* buf, size_t buf_len, int* n_warnings) {
  return guarded([&] {
    need(b, out);
    const auto c = qbm::langevin::correspondence_map(bath(b), n_traj, seed);
    *out = to_c(c.config);
    write_messages(c.warnings, buf, buf_len, n_warnings);
  });
}

qbm_status qbm_modes_sample_drude(const qbm_bath* b, size_t n_modes, double omega_max, qbm_mode_scheme scheme,
                                  uint64_t seed, qbm_modes** out) {
  return guarded([&] {
    need(b, out);
    *out = nullptr;
    if (scheme != QBM_SCHEME_GRID && scheme != QBM_SCHEME_STRATIFIED) throw ArgumentError("unknown scheme");
    const auto s = scheme == QBM_SCHEME_GRID ? qbm::microbath::Scheme::Grid : qbm::microbath::Scheme::Stratified;
    *out = new qbm_modes{qbm::microbath::sample_drude(bath(b), n_modes, omega_max, s, seed)};
  });
}

void qbm_modes_free(qbm_modes* m) { delete m; }

size_t qbm_modes_count(const qbm_modes* m) { return m ? m->ens.n_modes() : 0; }

double qbm_modes_omega_max(const qbm_modes* m) { return m ? m->ens.omega_max : 0.0; }

qbm_status qbm_modes_get(const qbm_modes* m, size_t i, double* omega, double* mass, double* coupling) {
  return guarded([&] {
    need(m);
    if (i >= m->ens.n_modes()) throw ArgumentError("mode index out of range");
    if (omega) *omega = m->ens.omegas[i];
    if (mass) *mass = m->ens.masses[i];
    if (coupling) *coupling = m->ens.couplings[i];
  });
}

qbm_status qbm_modes_friction(const qbm_modes* m, double t, double* out) {
  return guarded([&] {
    need(m, out);
    *out = qbm::microbath::friction_kernel_discrete(m->ens, t);
  });
}

qbm_status qbm_modes_alpha_R(const qbm_modes* m, double tau, double T, double* out) {
  return guarded([&] {
    need(m, out);
    *out = T > 0.0 ? qbm::microbath::alpha_R_discrete(m->ens, tau, T) : qbm::microbath::alpha_R_discrete(m->ens, tau);
  });
}

qbm_status qbm_modes_alpha_I(const qbm_modes* m, double tau, double* out) {
  return guarded([&] {
    need(m, out);
    *out = qbm::microbath::alpha_I_discrete(m->ens, tau);
  });
}

double qbm_modes_validity_window(const qbm_modes* m) { return m ? qbm::microbath::validity_window(m->ens) : 0.0; }

qbm_status qbm_cutoff_tail_mass(const qbm_bath* b, double omega_max, double* out) {
  return guarded([&] {
    need(b, out);
    *out = qbm::microbath::cutoff_tail_mass(bath(b), omega_max);
  });
}

qbm_status qbm_modes_compare(const qbm_modes* m, qbm_kernel_kind kernel, qbm_reference ref, double tau_min,
                             double tau_max, size_t n_points, qbm_comparison_row* rows, double* linf_rel_error) {
  return guarded([&] {
    need(m);
    using qbm::microbath::Kernel;
    using qbm::microbath::Reference;
    Kernel k;
    switch (kernel) {
      case QBM_KERNEL_FRICTION: k = Kernel::Friction; break;
      case QBM_KERNEL_ALPHA_R: k = Kernel::AlphaR; break;
      case QBM_KERNEL_ALPHA_I: k = Kernel::AlphaI; break;
      default: throw ArgumentError("unknown kernel");
    }
    if (ref != QBM_REF_CONTINUUM && ref != QBM_REF_BAND_LIMITED) throw ArgumentError("unknown reference");
    const auto c = qbm::microbath::compare(m->ens, k, ref == QBM_REF_CONTINUUM ? Reference::Continuum : Reference::BandLimited,
                                           tau_min, tau_max, n_points);
    if (rows) {
      for (size_t i = 0; i < c.rows.size(); ++i) {
        rows[i] = {c.rows[i].tau, c.rows[i].discrete, c.rows[i].continuum, c.rows[i].rel_error};
      }
    }
    if (linf_rel_error) *linf_rel_error = c.linf_rel_error;
  });
}

}  // extern "C"
