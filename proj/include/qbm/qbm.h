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

/* C interface of the qbm library: quantum Brownian motion in a Drude bath.
 *
 * Conventions
 *   - Every fallible call returns qbm_status; on failure qbm_last_error()
 *     describes it (per thread, valid until the next failing call).
 *   - Opaque handles are created by qbm_*_create/sample/... and released by
 *     the matching qbm_*_free, which accepts NULL.
 *   - Plain structs are passed by pointer and never retained.
 *   - Units: any consistent system; qbm_particle_natural() gives
 *     hbar = kB = M = gamma = 1.
 */
#ifndef QBM_QBM_H_
#define QBM_QBM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(QBM_BUILDING_LIBRARY)
#    define QBM_API __declspec(dllexport)
#  else
#    define QBM_API __declspec(dllimport)
#  endif
#else
#  define QBM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qbm_status {
  QBM_OK = 0,
  QBM_ERR_INVALID_ARGUMENT = 1, /* NULL pointer, bad enum, short buffer */
  QBM_ERR_DOMAIN = 2,           /* input outside the operation's domain */
  QBM_ERR_NUMERICAL = 3,        /* non-finite result, integrator failure */
  QBM_ERR_RESONANCE = 4,        /* chi at a Matsubara pole (a domain error) */
  QBM_ERR_CONVERGENCE = 5,      /* quadrature/series budget exhausted (numerical) */
  QBM_ERR_IO = 6,
  QBM_ERR_INTERNAL = 7
} qbm_status;

QBM_API const char* qbm_version(void);
QBM_API const char* qbm_status_string(qbm_status status);
/* Message of the last failure on this thread ("" if none). */
QBM_API const char* qbm_last_error(void);

/* ---- parameters ------------------------------------------------------- */

typedef struct qbm_particle {
  double M;
  double gamma;
  double hbar;
  double kB;
} qbm_particle;

QBM_API qbm_particle qbm_particle_natural(void);

typedef struct qbm_bath {
  double M;
  double gamma;
  double omega_c;
  double T;
  double hbar;
  double kB;
} qbm_bath;

QBM_API qbm_status qbm_bath_from_theta(double theta, double omega_c, const qbm_particle* p, qbm_bath* out);
QBM_API qbm_status qbm_bath_from_chi(double chi, double omega_c, const qbm_particle* p, qbm_bath* out);
/* Validates the bath and writes newline-separated regime warnings into buf
 * (may be NULL). *n_warnings receives their count (may be NULL). */
QBM_API qbm_status qbm_bath_check(const qbm_bath* bath, char* buf, size_t buf_len, int* n_warnings);
/* u = hbar gamma/(2 kB T), chi = hbar omega_c/(2 kB T), theta = kB T/(hbar gamma). */
QBM_API qbm_status qbm_bath_dimensionless(const qbm_bath* bath, double* u, double* chi, double* theta);

/* ---- diffusion constants and positivity --------------------------------- */

typedef struct qbm_diffusion {
  double T;
  double theta;
  double D_qq;
  double D_pq;
  double D_pp;
  double Delta; /* D_pp D_qq - D_pq^2 - hbar^2 gamma^2 / 4 */
} qbm_diffusion;

QBM_API qbm_status qbm_diffusion_constants(const qbm_particle* p, double T, qbm_diffusion* out);
QBM_API qbm_status qbm_diffusion_constants_theta(const qbm_particle* p, double theta, qbm_diffusion* out);
/* T -> 0 limits by Richardson extrapolation from theta_probe (<= 0: 1e-4). */
QBM_API qbm_status qbm_zero_temperature_limits(const qbm_particle* p, double theta_probe, qbm_diffusion* out);
/* Delta / (hbar gamma)^2 as a function of u alone. */
QBM_API qbm_status qbm_delta_reduced(double u, double* out);

typedef struct qbm_critical {
  double theta0;
  double T0;
  double u_star;
  int iterations;
} qbm_critical;

QBM_API qbm_status qbm_critical_temperature(const qbm_particle* p, qbm_critical* out);

typedef struct qbm_high_t {
  double theta;
  double D_qq_leading;
  double D_pq_leading;
  double D_pp_leading;
  double qq_correction;
  double pq_correction;
  double pp_correction;
  int reliable; /* 0 for theta <= 10 */
} qbm_high_t;

QBM_API qbm_status qbm_high_t_expansion(const qbm_particle* p, double T, qbm_high_t* out);

/* n_points rows into out (caller-allocated). */
QBM_API qbm_status qbm_sweep(const qbm_particle* p, double theta_min, double theta_max, int n_points,
                             int log_spacing, qbm_diffusion* out);

/* ---- memory kernels --------------------------------------------------- */

typedef struct qbm_kernel_value {
  double tau;
  double value;
  int terms_used;
  double truncation_error;
} qbm_kernel_value;

QBM_API qbm_status qbm_drude_weight(const qbm_bath* bath, double omega, double* out);
QBM_API qbm_status qbm_alpha_I(const qbm_bath* bath, double tau, qbm_kernel_value* out);
/* rel_tol <= 0 selects the default (1e-14 series, 1e-8 quadrature). */
QBM_API qbm_status qbm_alpha_R_series(const qbm_bath* bath, double tau, double rel_tol, qbm_kernel_value* out);
QBM_API qbm_status qbm_alpha_R_quadrature(const qbm_bath* bath, double tau, double rel_tol, int classical,
                                          qbm_kernel_value* out);
QBM_API qbm_status qbm_slowest_decay_rate(const qbm_bath* bath, double* out);

/* ---- influence action ----------------------------------------------- */

typedef struct qbm_effective_action {
  double coeff_qminus_sq;
  double alpha;
  double bracket;
  double gamma_over_omega_c;
  double chi;
  int gamma_small;
  int chi_below_pi;
} qbm_effective_action;

QBM_API qbm_status qbm_zeta_even(int m, double* out);
QBM_API qbm_status qbm_effective_action_get(const qbm_bath* bath, qbm_effective_action* out);
/* Partial sums L = 1..max_order go to partial_sums (may be NULL; else at
 * least max_order entries). *converged_at is the first L within 1e-8 of the
 * closed form, or -1. Fails with QBM_ERR_DOMAIN unless gamma < omega_c and chi < pi. */
QBM_API qbm_status qbm_resummation_check(const qbm_bath* bath, int max_order, double* partial_sums,
                                         double* bracket, int* converged_at);

/* ---- Gaussian moments ------------------------------------------------- */

typedef struct qbm_moments {
  double mq;
  double mp;
  double sqq;
  double spp;
  double sqp;
  double t;
} qbm_moments;

QBM_API qbm_status qbm_minimum_uncertainty(double q0, double p0, double sigma0, double hbar, qbm_moments* out);
QBM_API qbm_status qbm_squeezed_state(double ratio, double angle, const qbm_particle* p, qbm_moments* out);

typedef struct qbm_trajectory qbm_trajectory;

QBM_API qbm_status qbm_moments_evolve(const qbm_moments* m0, const qbm_diffusion* d, const qbm_particle* p,
                                      double t_end, double dt, int sample_every, qbm_trajectory** out);
QBM_API size_t qbm_trajectory_size(const qbm_trajectory* tr);
QBM_API qbm_status qbm_trajectory_get(const qbm_trajectory* tr, size_t i, qbm_moments* out);
QBM_API double qbm_trajectory_min_product(const qbm_trajectory* tr);
QBM_API void qbm_trajectory_free(qbm_trajectory* tr);

typedef struct qbm_stationary {
  double spp;
  double sqp;
  double msd_slope;
} qbm_stationary;

QBM_API qbm_status qbm_moments_stationary(const qbm_diffusion* d, const qbm_particle* p, qbm_stationary* out);

typedef struct qbm_squeeze_options {
  int n_ratios;
  double ratio_min;
  double ratio_max;
  int n_angles;
  double t_end_gamma;
  double sample_gamma_dt;
  double dt_gamma;
} qbm_squeeze_options;

typedef struct qbm_squeeze_result {
  double min_excess;
  double best_ratio;
  double best_angle;
  double best_time;
  int violating_states;
  int states_scanned;
} qbm_squeeze_result;

QBM_API qbm_squeeze_options qbm_squeeze_defaults(void);
QBM_API qbm_status qbm_squeeze_scan(const qbm_diffusion* d, const qbm_particle* p, const qbm_squeeze_options* opt,
                                    qbm_squeeze_result* out);

/* ---- master-equation grid --------------------------------------------- */

typedef struct qbm_grid_shape {
  size_t n_center;
  double half_width_center;
  size_t n_relative; /* odd */
  double half_width_relative;
} qbm_grid_shape;

typedef struct qbm_grid qbm_grid;

typedef struct qbm_observables {
  double t;
  double trace;
  double mean_q;
  double mean_p;
  double sigma_qq;
  double sigma_pp;
  double sigma_qp;
  double purity;
  double min_diagonal;
  double boundary_fraction;
  double coherence_edge;
  int boundary_warning;
} qbm_observables;

typedef struct qbm_step_report {
  double trace_before;
  double trace_after;
  double hermiticity_drift;
} qbm_step_report;

typedef struct qbm_run_options {
  double t_end;
  double dt; /* 0: largest stable step */
  double sample_interval;
} qbm_run_options;

typedef struct qbm_run_summary {
  double dt;
  long steps;
  double max_trace_deviation;
  double max_hermiticity_drift;
  double max_hermiticity_deviation;
} qbm_run_summary;

typedef struct qbm_run qbm_run;

/* Called at every sample; a non-zero return stops the run early. */
typedef int (*qbm_sample_callback)(const qbm_grid* rho, const qbm_observables* obs, void* user);

QBM_API qbm_status qbm_grid_gaussian(double q0, double p0, double sigma0, const qbm_grid_shape* shape, double hbar,
                                     qbm_grid** out);
QBM_API void qbm_grid_free(qbm_grid* g);
QBM_API qbm_status qbm_grid_shape_get(const qbm_grid* g, qbm_grid_shape* out);
QBM_API double qbm_grid_time(const qbm_grid* g);
/* rho(R_i, r_j) with R = (x+y)/2, r = x-y. */
QBM_API qbm_status qbm_grid_value(const qbm_grid* g, size_t i, size_t j, double* re, double* im);
QBM_API qbm_status qbm_grid_coordinates(const qbm_grid* g, size_t i, size_t j, double* x, double* y);
QBM_API qbm_status qbm_grid_observables(const qbm_grid* g, double hbar, qbm_observables* out);
QBM_API qbm_status qbm_grid_max_stable_dt(const qbm_diffusion* d, const qbm_particle* p, const qbm_grid_shape* shape,
                                          double* out);
/* One RK4 step in place. On QBM_ERR_NUMERICAL the grid keeps its pre-step state. */
QBM_API qbm_status qbm_grid_step(qbm_grid* g, const qbm_diffusion* d, const qbm_particle* p, double dt,
                                 qbm_step_report* report);
/* Integrates in place. On QBM_ERR_NUMERICAL the grid holds the last finite
 * state and *out (if non-NULL) the samples taken so far. */
QBM_API qbm_status qbm_grid_evolve(qbm_grid* g, const qbm_diffusion* d, const qbm_particle* p,
                                   const qbm_run_options* opt, qbm_sample_callback cb, void* user, qbm_run** out);
QBM_API size_t qbm_run_size(const qbm_run* run);
QBM_API qbm_status qbm_run_sample(const qbm_run* run, size_t i, qbm_observables* out);
QBM_API qbm_status qbm_run_summary_get(const qbm_run* run, qbm_run_summary* out);
QBM_API void qbm_run_free(qbm_run* run);

QBM_API qbm_status qbm_grid_write_csv(const qbm_grid* g, const char* path);
QBM_API qbm_status qbm_grid_write_binary(const qbm_grid* g, const char* path);
QBM_API qbm_status qbm_grid_read_binary(const char* path, qbm_grid** out);

/* ---- classical Langevin ----------------------------------------------- */

typedef struct qbm_langevin_config {
  double gamma_cl;
  double T;
  double M;
  double kB;
  double dt;
  long n_steps;
  long n_traj;
  uint64_t seed;
  double q0;
  double p0;
  long sample_every;
  double stationary_from; /* < 0: half of t_end */
  int noise_refinement;
} qbm_langevin_config;

typedef struct qbm_langevin_sample {
  double t;
  double mean_p;
  double mean_p_se;
  double p2;
  double p2_se;
  double var_p;
  double mean_q;
  double var_q;
  double msd;
  double msd_se;
} qbm_langevin_sample;

typedef struct qbm_langevin_summary {
  double stationary_p2;
  double stationary_p2_se;
  double msd_slope;
  double msd_slope_se;
  double noise_strength; /* Gamma = 2 M gamma_cl kB T */
} qbm_langevin_summary;

typedef struct qbm_langevin_result qbm_langevin_result;

QBM_API qbm_langevin_config qbm_langevin_defaults(void);
QBM_API qbm_status qbm_langevin_simulate(const qbm_langevin_config* cfg, qbm_langevin_result** out);
QBM_API size_t qbm_langevin_size(const qbm_langevin_result* r);
QBM_API qbm_status qbm_langevin_sample_get(const qbm_langevin_result* r, size_t i, qbm_langevin_sample* out);
QBM_API qbm_status qbm_langevin_summary_get(const qbm_langevin_result* r, qbm_langevin_summary* out);
QBM_API void qbm_langevin_free(qbm_langevin_result* r);
/* gamma_cl = 2 gamma map; warnings as in qbm_bath_check. */
QBM_API qbm_status qbm_correspondence_map(const qbm_bath* bath, long n_traj, uint64_t seed, qbm_langevin_config* out,
                                          char* buf, size_t buf_len, int* n_warnings);

/* ---- discrete oscillator bath ---------------------------------------- */

typedef enum qbm_mode_scheme { QBM_SCHEME_GRID = 0, QBM_SCHEME_STRATIFIED = 1 } qbm_mode_scheme;
typedef enum qbm_kernel_kind { QBM_KERNEL_FRICTION = 0, QBM_KERNEL_ALPHA_R = 1, QBM_KERNEL_ALPHA_I = 2 } qbm_kernel_kind;
typedef enum qbm_reference { QBM_REF_CONTINUUM = 0, QBM_REF_BAND_LIMITED = 1 } qbm_reference;

typedef struct qbm_modes qbm_modes;

typedef struct qbm_comparison_row {
  double tau;
  double discrete;
  double continuum;
  double rel_error;
} qbm_comparison_row;

/* omega_max <= 0 selects 50 omega_c. */
QBM_API qbm_status qbm_modes_sample_drude(const qbm_bath* bath, size_t n_modes, double omega_max,
                                          qbm_mode_scheme scheme, uint64_t seed, qbm_modes** out);
QBM_API void qbm_modes_free(qbm_modes* m);
QBM_API size_t qbm_modes_count(const qbm_modes* m);
QBM_API double qbm_modes_omega_max(const qbm_modes* m);
QBM_API qbm_status qbm_modes_get(const qbm_modes* m, size_t i, double* omega, double* mass, double* coupling);
QBM_API qbm_status qbm_modes_friction(const qbm_modes* m, double t, double* out);
/* T <= 0 uses the bath temperature. */
QBM_API qbm_status qbm_modes_alpha_R(const qbm_modes* m, double tau, double T, double* out);
QBM_API qbm_status qbm_modes_alpha_I(const qbm_modes* m, double tau, double* out);
QBM_API double qbm_modes_validity_window(const qbm_modes* m);
QBM_API qbm_status qbm_cutoff_tail_mass(const qbm_bath* bath, double omega_max, double* out);
/* rows: n_points entries (caller-allocated). */
QBM_API qbm_status qbm_modes_compare(const qbm_modes* m, qbm_kernel_kind kernel, qbm_reference ref, double tau_min,
                                     double tau_max, size_t n_points, qbm_comparison_row* rows, double* linf_rel_error);

#ifdef __cplusplus
}
#endif

#endif /* QBM_QBM_H_ */
