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

// qbm command-line tool. Links only the C interface of libqbm.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qbm/qbm.h"
#include "svg_plot.hpp"

namespace {

namespace fs = std::filesystem;
using qbm::cli::PlotSpec;
using qbm::cli::Series;

constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitNumerical = 3;

struct CliError {
  int code;
  std::string message;
};

int exit_code(qbm_status s) {
  switch (s) {
    case QBM_ERR_INVALID_ARGUMENT:
    case QBM_ERR_DOMAIN:
    case QBM_ERR_RESONANCE: return kExitDomain;
    case QBM_ERR_NUMERICAL:
    case QBM_ERR_CONVERGENCE: return kExitNumerical;
    default: return kExitUsage;
  }
}

void check(qbm_status s, const std::string& context) {
  if (s != QBM_OK) throw CliError{exit_code(s), context + ": " + qbm_last_error()};
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

// Options shared by all subcommands.
struct Common {
  std::string units{"natural"};
  double hbar{1.0};
  double kB{1.0};
  double M{1.0};
  double gamma{1.0};
  std::string out_dir;
  bool plot{false};
  CLI::Option* hbar_opt{nullptr};
  CLI::Option* kB_opt{nullptr};
  CLI::Option* M_opt{nullptr};
  CLI::Option* gamma_opt{nullptr};

  qbm_particle particle() const {
    if (units == "si") {
      for (auto* o : {hbar_opt, kB_opt, M_opt, gamma_opt}) {
        if (o->count() == 0) throw CliError{kExitUsage, "--units si requires " + o->get_name() + " to be set"};
      }
    }
    return {M, gamma, hbar, kB};
  }
};

// Temperature given as theta = kB T/(hbar gamma) or as T.
struct Temperature {
  std::optional<double> theta;
  std::optional<double> T;

  void add(CLI::App* cmd) {
    auto* a = cmd->add_option("--theta", theta, "kB T / (hbar gamma)");
    auto* b = cmd->add_option("--T", T, "temperature");
    a->excludes(b);
  }
  bool given() const { return theta.has_value() || T.has_value(); }
  double as_theta(const qbm_particle& p) const {
    if (theta) return *theta;
    if (T) return p.kB * *T / (p.hbar * p.gamma);
    throw CliError{kExitUsage, "one of --theta or --T is required"};
  }
};

struct Output {
  std::string name;
  std::string schema;
  std::vector<std::string> notes;  // "key=value" lines
  std::ostringstream csv;
  std::optional<PlotSpec> plot;
  std::vector<Series> series;
};

// Resolved configuration of the global options and the active subcommand.
// `sectioned` gives the [subcommand] form that --config reads back (the
// section header is what selects the subcommand); otherwise keys are dotted.
std::string resolved_config(const CLI::App& app, bool sectioned) {
  std::string active;
  for (const auto* sub : app.get_subcommands()) active = sub->get_name();
  std::ostringstream os;
  std::istringstream cfg(app.config_to_str(true, false));
  std::string section;
  for (std::string line; std::getline(cfg, line);) {
    if (line.size() > 2 && line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      if (sectioned && section == active) os << line << "\n";
      continue;
    }
    const auto eq = line.find('=');
    // unset optionals would read back as set
    if (line.empty() || eq == std::string::npos || line.substr(eq + 1) == "\"\"") continue;
    const std::string key = line.substr(0, eq);
    // other subcommands follow as dotted keys; where output goes is not part of the run
    if (key.find('.') != std::string::npos || key == "out-dir") continue;
    if (section.empty()) {
      os << line << "\n";
    } else if (section == active) {
      os << (sectioned ? "" : section + ".") << line << "\n";
    }
  }
  if (sectioned && active.size() && os.str().find("[" + active + "]") == std::string::npos) {
    os << "[" << active << "]\n";
  }
  return os.str();
}

std::string metadata(const Output& out) {
  std::ostringstream os;
  os << "qbm_version=" << qbm_version() << "\n";
  os << "schema=" << out.schema << "\n";
  for (const auto& n : out.notes) os << n << "\n";
  return os.str();
}

std::string prefixed(const std::string& text, const std::string& prefix) {
  std::ostringstream os;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) os << prefix << line << "\n";
  return os.str();
}

void emit(const CLI::App& app, const Common& c, const Output& out) {
  const std::string meta = metadata(out);
  const std::string cfg = resolved_config(app, false);
  const std::string header = prefixed(meta, "# ") + prefixed(cfg, "# config: ");

  if (c.out_dir.empty()) {
    std::cout << header << out.csv.str();
    std::cout.flush();
  } else {
    fs::create_directories(c.out_dir);
    const fs::path dir(c.out_dir);
    std::ofstream csv(dir / (out.name + ".csv"));
    std::ofstream mf(dir / "manifest.txt");
    if (!csv || !mf) throw CliError{kExitUsage, "cannot write into " + c.out_dir};
    csv << header << out.csv.str();
    mf << prefixed(meta, "# ") << resolved_config(app, true);
    std::cerr << "wrote " << (dir / (out.name + ".csv")).string() << "\n";
  }
  if (c.plot && out.plot) {
    const fs::path dir = c.out_dir.empty() ? fs::path(".") : fs::path(c.out_dir);
    std::ofstream svg(dir / (out.name + ".svg"));
    if (!svg) throw CliError{kExitUsage, "cannot write plot"};
    svg << qbm::cli::render_svg(*out.plot, out.series);
  }
}

// ---- subcommands --------------------------------------------------------

void cmd_coeffs(const Common& c, const Temperature& temp, Output& out) {
  const qbm_particle p = c.particle();
  const double theta = temp.as_theta(p);
  qbm_diffusion d{};
  check(qbm_diffusion_constants_theta(&p, theta, &d), "coeffs");
  const double scale = p.hbar * p.gamma;
  out.csv << "theta,T,u,D_qq,D_pq,D_pp,Delta,Delta_reduced\n";
  out.csv << num(d.theta) << ',' << num(d.T) << ',' << num(0.5 / d.theta) << ',' << num(d.D_qq) << ','
          << num(d.D_pq) << ',' << num(d.D_pp) << ',' << num(d.Delta) << ',' << num(d.Delta / (scale * scale))
          << '\n';
}

struct SweepArgs {
  double theta_min{0.01};
  double theta_max{10.0};
  int n{50};
  std::string spacing{"log"};
};

void cmd_sweep(const Common& c, const SweepArgs& a, Output& out) {
  const qbm_particle p = c.particle();
  if (a.n < 2) throw CliError{kExitDomain, "sweep: --n must be at least 2"};
  std::vector<qbm_diffusion> rows(static_cast<size_t>(a.n));
  check(qbm_sweep(&p, a.theta_min, a.theta_max, a.n, a.spacing == "log", rows.data()), "sweep");
  const double scale = p.hbar * p.gamma;
  out.csv << "theta,T,D_qq,D_pq,D_pp,Delta,Delta_reduced\n";
  Series s{"Delta/(hbar gamma)^2", {}, {}};
  for (const auto& d : rows) {
    const double red = d.Delta / (scale * scale);
    out.csv << num(d.theta) << ',' << num(d.T) << ',' << num(d.D_qq) << ',' << num(d.D_pq) << ',' << num(d.D_pp)
            << ',' << num(d.Delta) << ',' << num(red) << '\n';
    s.x.push_back(d.theta);
    s.y.push_back(red);
  }
  out.plot = PlotSpec{"Positivity functional", "theta = kB T/(hbar gamma)", "Delta/(hbar gamma)^2",
                      a.spacing == "log", false};
  out.series.push_back(std::move(s));
}

void cmd_critical(const Common& c, Output& out) {
  const qbm_particle p = c.particle();
  qbm_critical r{};
  check(qbm_critical_temperature(&p, &r), "critical-temp");
  out.csv << "theta0,T0,u_star,iterations\n";
  out.csv << num(r.theta0) << ',' << num(r.T0) << ',' << num(r.u_star) << ',' << r.iterations << '\n';
}

struct BathArgs {
  Temperature temp;
  std::optional<double> chi;
  double omega_c_over_gamma{20.0};

  void add(CLI::App* cmd) {
    temp.add(cmd);
    auto* o = cmd->add_option("--chi", chi, "hbar omega_c / (2 kB T); alternative to --theta/--T");
    o->excludes("--theta")->excludes("--T");
    cmd->add_option("--omega-c", omega_c_over_gamma, "cutoff frequency in units of gamma")->capture_default_str();
  }
  qbm_bath make(const qbm_particle& p) const {
    qbm_bath b{};
    const double wc = omega_c_over_gamma * p.gamma;
    if (chi) {
      check(qbm_bath_from_chi(*chi, wc, &p, &b), "bath");
    } else {
      check(qbm_bath_from_theta(temp.as_theta(p), wc, &p, &b), "bath");
    }
    return b;
  }
};

void bath_warnings(const qbm_bath& b, Output& out) {
  char buf[1024];
  int n = 0;
  check(qbm_bath_check(&b, buf, sizeof buf, &n), "bath");
  if (n > 0) {
    std::istringstream is(buf);
    for (std::string line; std::getline(is, line);) {
      std::cerr << "warning: " << line << "\n";
      out.notes.push_back("warning=" + line);
    }
  }
}

struct KernelArgs {
  BathArgs bath;
  double tau_min{0.5};
  double tau_max{5.0};
  int n{10};
  std::string method{"both"};
  double rel_tol{0.0};
};

void cmd_kernel(const Common& c, const KernelArgs& a, Output& out) {
  const qbm_particle p = c.particle();
  const qbm_bath b = a.bath.make(p);
  bath_warnings(b, out);
  if (a.n < 1 || !(a.tau_min > 0.0) || a.tau_max < a.tau_min) {
    throw CliError{kExitDomain, "kernel: need --n >= 1 and 0 < --tau-min <= --tau-max"};
  }
  double u = 0, chi = 0, theta = 0;
  check(qbm_bath_dimensionless(&b, &u, &chi, &theta), "kernel");
  out.notes.push_back("chi=" + num(chi));
  out.notes.push_back("theta=" + num(theta));
  const bool series = a.method != "quadrature";
  const bool quad = a.method != "series";
  out.csv << "tau,tau_wc,series,quadrature,rel_diff,alpha_I\n";
  Series ss{"series", {}, {}}, sq{"quadrature", {}, {}};
  for (int k = 0; k < a.n; ++k) {
    const double s = a.n == 1 ? a.tau_min : a.tau_min + (a.tau_max - a.tau_min) * k / (a.n - 1);
    const double tau = s / b.omega_c;
    double vs = NAN, vq = NAN;
    qbm_kernel_value kv{};
    if (series) {
      const qbm_status st = qbm_alpha_R_series(&b, tau, a.rel_tol, &kv);
      if (st == QBM_ERR_RESONANCE) {
        throw CliError{kExitDomain, std::string("kernel: ") + qbm_last_error() +
                                        "; move chi away from the pole or use --method quadrature"};
      }
      check(st, "kernel (series)");
      vs = kv.value;
    }
    if (quad) {
      check(qbm_alpha_R_quadrature(&b, tau, a.rel_tol, 0, &kv), "kernel (quadrature)");
      vq = kv.value;
    }
    qbm_kernel_value ki{};
    check(qbm_alpha_I(&b, tau, &ki), "kernel (alpha_I)");
    const double diff = (series && quad) ? std::abs(vs - vq) / std::abs(vq) : NAN;
    out.csv << num(tau) << ',' << num(s) << ',' << num(vs) << ',' << num(vq) << ',' << num(diff) << ','
            << num(ki.value) << '\n';
    ss.x.push_back(s);
    ss.y.push_back(vs);
    sq.x.push_back(s);
    sq.y.push_back(vq);
  }
  out.plot = PlotSpec{"Noise kernel alpha_R", "tau omega_c", "alpha_R", false, false};
  if (series) out.series.push_back(ss);
  if (quad) out.series.push_back(sq);
}

struct EvolveArgs {
  std::string mode{"moments"};
  Temperature temp;
  double q0{0.0};
  double p0{0.0};
  double sigma0{1.0};
  double ratio{0.0};
  double angle{0.0};
  double t_end{5.0};
  double sample{0.1};
  double dt{0.0};
  int n{257};
  int n_relative{0};
  double half_width{0.0};
  double half_width_relative{0.0};
  int snapshot_every{0};
  std::string snapshot_format{"csv"};
};

struct TrajectoryDeleter {
  void operator()(qbm_trajectory* t) const { qbm_trajectory_free(t); }
};
struct GridDeleter {
  void operator()(qbm_grid* g) const { qbm_grid_free(g); }
};
struct RunDeleter {
  void operator()(qbm_run* r) const { qbm_run_free(r); }
};

void trajectory_header(Output& out) {
  out.csv << "t,trace,mean_q,mean_p,sigma_qq,sigma_pp,sigma_qp,uncertainty_product,purity,boundary_warning\n";
}

void trajectory_row(Output& out, double t, double trace, double mq, double mp, double sqq, double spp, double sqp,
                    double purity, int warn, std::vector<Series>& plot) {
  const double prod = sqq * spp - sqp * sqp;
  out.csv << num(t) << ',' << num(trace) << ',' << num(mq) << ',' << num(mp) << ',' << num(sqq) << ',' << num(spp)
          << ',' << num(sqp) << ',' << num(prod) << ',' << num(purity) << ',' << warn << '\n';
  plot[0].x.push_back(t);
  plot[0].y.push_back(sqq);
  plot[1].x.push_back(t);
  plot[1].y.push_back(spp);
  plot[2].x.push_back(t);
  plot[2].y.push_back(sqp);
}

// returns a non-zero exit code for partial output
int cmd_evolve(const Common& c, const EvolveArgs& a, Output& out) {
  const qbm_particle p = c.particle();
  const double theta = a.temp.as_theta(p);
  qbm_diffusion d{};
  check(qbm_diffusion_constants_theta(&p, theta, &d), "evolve");
  if (!(a.t_end > 0.0) || !(a.sample > 0.0)) throw CliError{kExitDomain, "evolve: --t-end and --sample must be > 0"};
  const double t_end = a.t_end / p.gamma;
  const double sample = a.sample / p.gamma;

  qbm_moments m0{};
  if (a.ratio > 0.0) {
    if (a.mode == "grid") throw CliError{kExitDomain, "evolve: squeezed initial states are only supported in moments mode"};
    check(qbm_squeezed_state(a.ratio, a.angle, &p, &m0), "evolve");
    m0.mq = a.q0;
    m0.mp = a.p0;
  } else {
    check(qbm_minimum_uncertainty(a.q0, a.p0, a.sigma0, p.hbar, &m0), "evolve");
  }

  std::vector<Series> plot{{"sigma_qq", {}, {}}, {"sigma_pp", {}, {}}, {"sigma_qp", {}, {}}};
  out.plot = PlotSpec{"Second moments, theta = " + num(theta), "t", "covariance", false, false};
  out.notes.push_back("mode=" + a.mode);
  out.notes.push_back("Delta=" + num(d.Delta));

  // moment trajectory: the output in moments mode, the extent estimate in grid mode
  const double mdt = a.mode == "moments" && a.dt > 0.0 ? a.dt / p.gamma : 1e-3 / p.gamma;
  const int every = std::max(1, static_cast<int>(std::lround(sample / mdt)));
  qbm_trajectory* raw = nullptr;
  check(qbm_moments_evolve(&m0, &d, &p, t_end, mdt, every, &raw), "evolve (moments)");
  std::unique_ptr<qbm_trajectory, TrajectoryDeleter> tr(raw);
  const size_t ns = qbm_trajectory_size(tr.get());

  if (a.mode == "moments") {
    trajectory_header(out);
    for (size_t i = 0; i < ns; ++i) {
      qbm_moments m{};
      check(qbm_trajectory_get(tr.get(), i, &m), "evolve");
      const double det = m.sqq * m.spp - m.sqp * m.sqp;
      trajectory_row(out, m.t, 1.0, m.mq, m.mp, m.sqq, m.spp, m.sqp, det > 0 ? p.hbar / (2.0 * std::sqrt(det)) : NAN,
                     0, plot);
    }
    out.notes.push_back("min_uncertainty_product=" + num(qbm_trajectory_min_product(tr.get())));
    out.series = std::move(plot);
    return 0;
  }
  if (a.mode != "grid") throw CliError{kExitUsage, "evolve: --mode must be grid or moments"};

  // grid extents from the predicted moments
  double q_reach = 0.0, spp_min = INFINITY;
  for (size_t i = 0; i < ns; ++i) {
    qbm_moments m{};
    check(qbm_trajectory_get(tr.get(), i, &m), "evolve");
    q_reach = std::max(q_reach, std::abs(m.mq) + 6.0 * std::sqrt(m.sqq));
    spp_min = std::min(spp_min, m.spp);
  }
  qbm_grid_shape shape{};
  shape.n_center = static_cast<size_t>(a.n);
  shape.n_relative = static_cast<size_t>(a.n_relative > 0 ? a.n_relative : a.n);
  if (shape.n_relative % 2 == 0) ++shape.n_relative;
  shape.half_width_center =
      a.half_width > 0.0 ? a.half_width : std::max(8.0 * a.sigma0 + std::abs(a.q0), q_reach);
  shape.half_width_relative =
      a.half_width_relative > 0.0 ? a.half_width_relative : std::max(8.0 * a.sigma0, 4.0 * p.hbar / std::sqrt(spp_min));
  out.notes.push_back("n_center=" + std::to_string(shape.n_center));
  out.notes.push_back("n_relative=" + std::to_string(shape.n_relative));
  out.notes.push_back("half_width_center=" + num(shape.half_width_center));
  out.notes.push_back("half_width_relative=" + num(shape.half_width_relative));

  qbm_grid* g_raw = nullptr;
  check(qbm_grid_gaussian(a.q0, a.p0, a.sigma0, &shape, p.hbar, &g_raw), "evolve (grid)");
  std::unique_ptr<qbm_grid, GridDeleter> g(g_raw);

  struct SnapshotState {
    const EvolveArgs* args;
    fs::path dir;
    int index;
    std::string error;
  } snap{&a, c.out_dir.empty() ? fs::path(".") : fs::path(c.out_dir), 0, {}};
  qbm_sample_callback cb = nullptr;
  if (a.snapshot_every > 0) {
    fs::create_directories(snap.dir);
    cb = [](const qbm_grid* rho, const qbm_observables*, void* user) -> int {
      auto* s = static_cast<SnapshotState*>(user);
      const int k = s->index++;
      if (k % s->args->snapshot_every != 0) return 0;
      char name[64];
      const bool bin = s->args->snapshot_format == "bin";
      std::snprintf(name, sizeof name, "rho_%05d.%s", k, bin ? "bin" : "csv");
      const std::string path = (s->dir / name).string();
      const qbm_status st = bin ? qbm_grid_write_binary(rho, path.c_str()) : qbm_grid_write_csv(rho, path.c_str());
      if (st != QBM_OK) {
        s->error = qbm_last_error();
        return 1;
      }
      return 0;
    };
  }

  const qbm_run_options opt{t_end, a.dt / p.gamma, sample};
  qbm_run* run_raw = nullptr;
  const qbm_status st = qbm_grid_evolve(g.get(), &d, &p, &opt, cb, &snap, &run_raw);
  std::unique_ptr<qbm_run, RunDeleter> run(run_raw);
  const std::string err = st == QBM_OK ? "" : qbm_last_error();
  if (!snap.error.empty()) throw CliError{kExitUsage, "evolve: snapshot failed: " + snap.error};
  if (st != QBM_OK && st != QBM_ERR_NUMERICAL) check(st, "evolve (grid)");

  trajectory_header(out);
  bool warned = false;
  for (size_t i = 0; i < qbm_run_size(run.get()); ++i) {
    qbm_observables o{};
    check(qbm_run_sample(run.get(), i, &o), "evolve");
    warned = warned || o.boundary_warning;
    trajectory_row(out, o.t, o.trace, o.mean_q, o.mean_p, o.sigma_qq, o.sigma_pp, o.sigma_qp, o.purity,
                   o.boundary_warning, plot);
  }
  if (st == QBM_OK) {
    qbm_run_summary s{};
    check(qbm_run_summary_get(run.get(), &s), "evolve");
    out.notes.push_back("dt=" + num(s.dt));
    out.notes.push_back("steps=" + std::to_string(s.steps));
    out.notes.push_back("max_trace_deviation=" + num(s.max_trace_deviation));
    out.notes.push_back("max_hermiticity_drift=" + num(s.max_hermiticity_drift));
  } else {
    out.notes.push_back("error=" + err);
  }
  if (warned) std::cerr << "warning: density reached the grid boundary; enlarge --half-width\n";
  out.series = std::move(plot);
  if (st == QBM_ERR_NUMERICAL) {
    std::cerr << "error: evolve (grid): " << err << "\n";
    return kExitNumerical;
  }
  return 0;
}

struct LangevinArgs {
  BathArgs bath;
  bool map{false};
  std::optional<double> gamma_cl;
  double dt{0.0};
  double t_end{0.0};
  long n_traj{100000};
  std::uint64_t seed{0x5eed};
  double q0{0.0};
  double p0{0.0};
  long sample_every{10};
  double stationary_from{-1.0};
  int noise_refinement{1};
};

struct LangevinDeleter {
  void operator()(qbm_langevin_result* r) const { qbm_langevin_free(r); }
};

void cmd_langevin(const Common& c, const LangevinArgs& a, Output& out) {
  const qbm_particle p = c.particle();
  qbm_langevin_config cfg = qbm_langevin_defaults();
  if (a.map) {
    const qbm_bath b = a.bath.make(p);
    char buf[512];
    int n = 0;
    check(qbm_correspondence_map(&b, a.n_traj, a.seed, &cfg, buf, sizeof buf, &n), "langevin");
    if (n > 0) {
      std::cerr << "warning: " << buf << "\n";
      out.notes.push_back(std::string("warning=") + buf);
    }
  } else {
    const double theta = a.bath.temp.as_theta(p);
    cfg.gamma_cl = a.gamma_cl.value_or(2.0 * p.gamma);
    cfg.T = theta * p.hbar * p.gamma / p.kB;
    cfg.M = p.M;
    cfg.kB = p.kB;
    cfg.dt = 0.01 / cfg.gamma_cl;
    cfg.n_steps = 2000;
    cfg.n_traj = a.n_traj;
    cfg.seed = a.seed;
  }
  if (a.dt > 0.0) cfg.dt = a.dt;
  if (a.t_end > 0.0) cfg.n_steps = std::lround(a.t_end / cfg.dt);
  cfg.q0 = a.q0;
  cfg.p0 = a.p0;
  cfg.sample_every = a.sample_every;
  cfg.stationary_from = a.stationary_from;
  cfg.noise_refinement = a.noise_refinement;

  qbm_langevin_result* raw = nullptr;
  check(qbm_langevin_simulate(&cfg, &raw), "langevin");
  std::unique_ptr<qbm_langevin_result, LangevinDeleter> res(raw);
  qbm_langevin_summary s{};
  check(qbm_langevin_summary_get(res.get(), &s), "langevin");
  const double mkt = cfg.M * cfg.kB * cfg.T;
  out.notes.push_back("seed=" + std::to_string(cfg.seed));
  out.notes.push_back("gamma_cl=" + num(cfg.gamma_cl));
  out.notes.push_back("dt=" + num(cfg.dt));
  out.notes.push_back("n_steps=" + std::to_string(cfg.n_steps));
  out.notes.push_back("n_traj=" + std::to_string(cfg.n_traj));
  out.notes.push_back("noise_strength=" + num(s.noise_strength));
  out.notes.push_back("stationary_p2=" + num(s.stationary_p2));
  out.notes.push_back("stationary_p2_se=" + num(s.stationary_p2_se));
  out.notes.push_back("stationary_p2_over_MkT=" + num(s.stationary_p2 / mkt));
  out.notes.push_back("msd_slope=" + num(s.msd_slope));
  out.notes.push_back("msd_slope_se=" + num(s.msd_slope_se));
  out.notes.push_back("msd_slope_reference=" + num(2.0 * cfg.kB * cfg.T / (cfg.M * cfg.gamma_cl)));

  out.csv << "t,mean_p,mean_p_se,p2,p2_se,var_p,mean_q,var_q,msd,msd_se\n";
  Series sp{"<p^2>/(M kB T)", {}, {}};
  for (size_t i = 0; i < qbm_langevin_size(res.get()); ++i) {
    qbm_langevin_sample r{};
    check(qbm_langevin_sample_get(res.get(), i, &r), "langevin");
    out.csv << num(r.t) << ',' << num(r.mean_p) << ',' << num(r.mean_p_se) << ',' << num(r.p2) << ',' << num(r.p2_se)
            << ',' << num(r.var_p) << ',' << num(r.mean_q) << ',' << num(r.var_q) << ',' << num(r.msd) << ','
            << num(r.msd_se) << '\n';
    sp.x.push_back(r.t);
    sp.y.push_back(r.p2 / mkt);
  }
  out.plot = PlotSpec{"Langevin ensemble", "t", "<p^2>/(M kB T)", false, false};
  out.series.push_back(std::move(sp));
}

struct MicrobathArgs {
  BathArgs bath;
  long n_modes{10000};
  double omega_max{50.0};
  std::string scheme{"grid"};
  std::uint64_t seed{0};
  std::string kernel{"friction"};
  std::string reference{"continuum"};
  double tau_min{0.0};
  double tau_max{5.0};
  int n{101};
};

struct ModesDeleter {
  void operator()(qbm_modes* m) const { qbm_modes_free(m); }
};

void cmd_microbath(const Common& c, const MicrobathArgs& a, Output& out) {
  const qbm_particle p = c.particle();
  const qbm_bath b = a.bath.make(p);
  if (a.n_modes < 1 || a.n < 2) throw CliError{kExitDomain, "microbath: need --n-modes >= 16 and --n >= 2"};
  const qbm_mode_scheme scheme = a.scheme == "stratified" ? QBM_SCHEME_STRATIFIED : QBM_SCHEME_GRID;
  qbm_modes* raw = nullptr;
  check(qbm_modes_sample_drude(&b, static_cast<size_t>(a.n_modes), a.omega_max * b.omega_c, scheme, a.seed, &raw),
        "microbath");
  std::unique_ptr<qbm_modes, ModesDeleter> modes(raw);

  qbm_kernel_kind kind = QBM_KERNEL_FRICTION;
  if (a.kernel == "alpha-r") kind = QBM_KERNEL_ALPHA_R;
  if (a.kernel == "alpha-i") kind = QBM_KERNEL_ALPHA_I;
  const qbm_reference ref = a.reference == "band-limited" ? QBM_REF_BAND_LIMITED : QBM_REF_CONTINUUM;

  const double window = qbm_modes_validity_window(modes.get());
  double tau_max = a.tau_max / b.omega_c;
  if (tau_max > window) {
    out.notes.push_back("clipped_to_validity_window=1");
    std::cerr << "warning: tau range clipped to the validity window " << window << "\n";
    tau_max = window;
  }
  std::vector<qbm_comparison_row> rows(static_cast<size_t>(a.n));
  double linf = 0.0;
  check(qbm_modes_compare(modes.get(), kind, ref, a.tau_min / b.omega_c, tau_max, rows.size(), rows.data(), &linf),
        "microbath");
  double tail = 0.0;
  check(qbm_cutoff_tail_mass(&b, qbm_modes_omega_max(modes.get()), &tail), "microbath");
  out.notes.push_back("n_modes=" + std::to_string(a.n_modes));
  out.notes.push_back("omega_max=" + num(qbm_modes_omega_max(modes.get())));
  out.notes.push_back("validity_window=" + num(window));
  out.notes.push_back("cutoff_tail_mass=" + num(tail));
  out.notes.push_back("linf_rel_error=" + num(linf));

  out.csv << "tau,discrete_value,continuum_value,rel_error\n";
  Series sd{"discrete", {}, {}}, sc{"continuum", {}, {}};
  for (const auto& r : rows) {
    out.csv << num(r.tau) << ',' << num(r.discrete) << ',' << num(r.continuum) << ',' << num(r.rel_error) << '\n';
    sd.x.push_back(r.tau);
    sd.y.push_back(r.discrete);
    sc.x.push_back(r.tau);
    sc.y.push_back(r.continuum);
  }
  out.plot = PlotSpec{"Microbath kernel (" + a.kernel + ")", "tau", "kernel", false, false};
  out.series = {sd, sc};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Brownian motion in a Drude bath: coefficients, kernels and dynamics"};
  app.set_version_flag("--version", std::string(qbm_version()));
  app.set_config("--config", "", "flat key = value configuration file");
  app.require_subcommand(1);
  app.fallthrough();

  Common c;
  app.add_option("--units", c.units, "natural (hbar = kB = M = gamma = 1) or si")
      ->check(CLI::IsMember({"natural", "si"}))
      ->capture_default_str();
  c.hbar_opt = app.add_option("--hbar", c.hbar, "reduced Planck constant")->capture_default_str();
  c.kB_opt = app.add_option("--kB", c.kB, "Boltzmann constant")->capture_default_str();
  c.M_opt = app.add_option("--mass", c.M, "particle mass")->capture_default_str();
  c.gamma_opt = app.add_option("--gamma", c.gamma, "damping rate")->capture_default_str();
  app.add_option("--out-dir", c.out_dir, "write <command>.csv and manifest.txt here instead of stdout");
  app.add_flag("--plot", c.plot, "also write an SVG plot");

  Output out;
  std::function<int()> run;

  Temperature coeffs_t;
  auto* coeffs = app.add_subcommand("coeffs", "diffusion constants and Delta at one temperature");
  coeffs_t.add(coeffs);
  coeffs->callback([&] {
    out.name = "coeffs";
    out.schema = "qbm.coeffs/1";
    run = [&] { cmd_coeffs(c, coeffs_t, out); return 0; };
  });

  SweepArgs sweep_a;
  auto* sweep = app.add_subcommand("sweep", "diffusion constants over a theta range");
  sweep->add_option("--theta-min", sweep_a.theta_min)->capture_default_str();
  sweep->add_option("--theta-max", sweep_a.theta_max)->capture_default_str();
  sweep->add_option("--n", sweep_a.n, "number of rows")->capture_default_str();
  sweep->add_option("--spacing", sweep_a.spacing)->check(CLI::IsMember({"log", "linear"}))->capture_default_str();
  sweep->callback([&] {
    out.name = "sweep";
    out.schema = "qbm.sweep/1";
    run = [&] { cmd_sweep(c, sweep_a, out); return 0; };
  });

  auto* crit = app.add_subcommand("critical-temp", "temperature where Delta changes sign");
  crit->callback([&] {
    out.name = "critical_temp";
    out.schema = "qbm.critical_temp/1";
    run = [&] { cmd_critical(c, out); return 0; };
  });

  KernelArgs kern_a;
  auto* kern = app.add_subcommand("kernel", "noise kernel alpha_R from the Matsubara series and by quadrature");
  kern_a.bath.add(kern);
  kern->add_option("--tau-min", kern_a.tau_min, "in units of 1/omega_c")->capture_default_str();
  kern->add_option("--tau-max", kern_a.tau_max, "in units of 1/omega_c")->capture_default_str();
  kern->add_option("--n", kern_a.n)->capture_default_str();
  kern->add_option("--method", kern_a.method)->check(CLI::IsMember({"series", "quadrature", "both"}))->capture_default_str();
  kern->add_option("--rel-tol", kern_a.rel_tol, "0 selects the method default")->capture_default_str();
  kern->callback([&] {
    out.name = "kernel";
    out.schema = "qbm.kernel/1";
    run = [&] { cmd_kernel(c, kern_a, out); return 0; };
  });

  EvolveArgs ev_a;
  auto* ev = app.add_subcommand("evolve", "time evolution on the density-matrix grid or of the Gaussian moments");
  ev->add_option("--mode", ev_a.mode)->check(CLI::IsMember({"grid", "moments"}))->capture_default_str();
  ev_a.temp.add(ev);
  ev->add_option("--q0", ev_a.q0)->capture_default_str();
  ev->add_option("--p0", ev_a.p0)->capture_default_str();
  ev->add_option("--sigma0", ev_a.sigma0, "initial position width")->capture_default_str();
  ev->add_option("--ratio", ev_a.ratio, "squeeze ratio (moments mode; 0 = minimum-uncertainty packet)")->capture_default_str();
  ev->add_option("--angle", ev_a.angle, "squeeze rotation angle")->capture_default_str();
  ev->add_option("--t-end", ev_a.t_end, "in units of 1/gamma")->capture_default_str();
  ev->add_option("--sample", ev_a.sample, "sampling interval in units of 1/gamma")->capture_default_str();
  ev->add_option("--dt", ev_a.dt, "step in units of 1/gamma; 0 = automatic")->capture_default_str();
  ev->add_option("--n", ev_a.n, "grid points along R = (x+y)/2")->capture_default_str();
  ev->add_option("--n-relative", ev_a.n_relative, "grid points along r = x-y (odd; 0 = same as --n)")->capture_default_str();
  ev->add_option("--half-width", ev_a.half_width, "R half width; 0 = from the predicted spread")->capture_default_str();
  ev->add_option("--half-width-relative", ev_a.half_width_relative, "r half width; 0 = automatic")->capture_default_str();
  ev->add_option("--snapshot-every", ev_a.snapshot_every, "write every k-th sampled grid (0 = none)")->capture_default_str();
  ev->add_option("--snapshot-format", ev_a.snapshot_format)->check(CLI::IsMember({"csv", "bin"}))->capture_default_str();
  ev->callback([&] {
    out.name = "evolve";
    out.schema = "qbm.evolve/1";
    run = [&] { return cmd_evolve(c, ev_a, out); };
  });

  LangevinArgs lg_a;
  auto* lg = app.add_subcommand("langevin", "classical Langevin ensemble (Euler-Maruyama)");
  lg_a.bath.add(lg);
  lg->add_flag("--map", lg_a.map, "use the classical counterpart of the bath (gamma_cl = 2 gamma)");
  lg->add_option("--gamma-cl", lg_a.gamma_cl, "classical damping rate (default 2 gamma)");
  lg->add_option("--dt", lg_a.dt, "0 = 0.01/gamma_cl")->capture_default_str();
  lg->add_option("--t-end", lg_a.t_end, "0 = 20/gamma_cl")->capture_default_str();
  lg->add_option("--n-traj", lg_a.n_traj)->capture_default_str();
  lg->add_option("--seed", lg_a.seed)->capture_default_str();
  lg->add_option("--q0", lg_a.q0)->capture_default_str();
  lg->add_option("--p0", lg_a.p0)->capture_default_str();
  lg->add_option("--sample-every", lg_a.sample_every)->capture_default_str();
  lg->add_option("--stationary-from", lg_a.stationary_from, "< 0: half of t_end")->capture_default_str();
  lg->add_option("--noise-refinement", lg_a.noise_refinement)->capture_default_str();
  lg->callback([&] {
    out.name = "langevin";
    out.schema = "qbm.langevin/1";
    run = [&] { cmd_langevin(c, lg_a, out); return 0; };
  });

  MicrobathArgs mb_a;
  auto* mb = app.add_subcommand("microbath", "discrete-mode reconstruction of the bath kernels");
  mb_a.bath.add(mb);
  mb->add_option("--n-modes", mb_a.n_modes)->capture_default_str();
  mb->add_option("--omega-max", mb_a.omega_max, "in units of omega_c")->capture_default_str();
  mb->add_option("--scheme", mb_a.scheme)->check(CLI::IsMember({"grid", "stratified"}))->capture_default_str();
  mb->add_option("--seed", mb_a.seed)->capture_default_str();
  mb->add_option("--kernel", mb_a.kernel)->check(CLI::IsMember({"friction", "alpha-r", "alpha-i"}))->capture_default_str();
  mb->add_option("--reference", mb_a.reference)->check(CLI::IsMember({"continuum", "band-limited"}))->capture_default_str();
  mb->add_option("--tau-min", mb_a.tau_min, "in units of 1/omega_c")->capture_default_str();
  mb->add_option("--tau-max", mb_a.tau_max, "in units of 1/omega_c")->capture_default_str();
  mb->add_option("--n", mb_a.n)->capture_default_str();
  mb->callback([&] {
    out.name = "microbath";
    out.schema = "qbm.microbath/1";
    run = [&] { cmd_microbath(c, mb_a, out); return 0; };
  });

  try {
    // a manifest names its subcommand through its section
    for (auto* sub : app.get_subcommands({})) sub->configurable();
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    const int rc = run();
    emit(app, c, out);
    return rc;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
