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

#include "core/langevin.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "core/errors.hpp"

namespace qbm::langevin {

namespace {

constexpr long kChunk = 1024;

struct Accum {
  double p = 0, p2 = 0, p4 = 0, q = 0, q2 = 0, msd = 0, msd2 = 0;
  void add(const Accum& o) {
    p += o.p;
    p2 += o.p2;
    p4 += o.p4;
    q += o.q;
    q2 += o.q2;
    msd += o.msd;
    msd2 += o.msd2;
  }
};

double stderr_of(double sum, double sum_sq, double n) {
  if (n < 2) return 0.0;
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq / n - mean * mean) * n / (n - 1));
  return std::sqrt(var / n);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + (stream + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void LangevinConfig::validate() const {
  if (!(gamma_cl > 0.0) || !(T > 0.0) || !(M > 0.0) || !(kB > 0.0) || !(dt > 0.0)) {
    throw DomainError("gamma_cl, T, M, kB and dt must be positive");
  }
  if (dt * gamma_cl > 0.01 * (1.0 + 1e-12)) throw DomainError("dt*gamma_cl must not exceed 0.01");
  if (n_steps < 1 || n_traj < 1 || sample_every < 1 || noise_refinement < 1) {
    throw DomainError("n_steps, n_traj, sample_every and noise_refinement must be positive");
  }
  if (!std::isfinite(q0) || !std::isfinite(p0)) throw DomainError("q0 and p0 must be finite");
  if (stationary_from > t_end()) throw DomainError("stationary_from lies beyond t_end");
}

LangevinResult simulate(const LangevinConfig& cfg) {
  cfg.validate();
  LangevinResult res;
  res.config = cfg;

  const long n_samples = cfg.n_steps / cfg.sample_every + 1;
  std::vector<double> times(static_cast<std::size_t>(n_samples));
  for (long k = 0; k < n_samples; ++k) times[static_cast<std::size_t>(k)] = static_cast<double>(k * cfg.sample_every) * cfg.dt;

  const double t_stat = cfg.stationary_from < 0.0 ? 0.5 * cfg.t_end() : cfg.stationary_from;
  std::vector<std::size_t> window;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] >= t_stat - 1e-12 * cfg.t_end()) window.push_back(k);
  }
  // least-squares slope weights over the window
  std::vector<double> slope_w(times.size(), 0.0);
  std::vector<char> in_window(times.size(), 0);
  for (auto k : window) in_window[k] = 1;
  if (window.size() >= 2) {
    double tbar = 0.0;
    for (auto k : window) tbar += times[k];
    tbar /= static_cast<double>(window.size());
    double sxx = 0.0;
    for (auto k : window) sxx += (times[k] - tbar) * (times[k] - tbar);
    for (auto k : window) slope_w[k] = (times[k] - tbar) / sxx;
  }

  const double decay = 1.0 - cfg.gamma_cl * cfg.dt;
  const int r = cfg.noise_refinement;
  const double kick = std::sqrt(cfg.Gamma() * cfg.dt / r);
  const double drift = cfg.dt / cfg.M;

  std::vector<Accum> total(times.size());
  std::vector<Accum> chunk(times.size());
  double stat_sum = 0.0, stat_sq = 0.0, slope_sum = 0.0, slope_sq = 0.0;
  double c_stat = 0.0, c_stat_sq = 0.0, c_slope = 0.0, c_slope_sq = 0.0;
  std::normal_distribution<double> normal(0.0, 1.0);

  for (long base = 0; base < cfg.n_traj; base += kChunk) {
    std::fill(chunk.begin(), chunk.end(), Accum{});
    c_stat = c_stat_sq = c_slope = c_slope_sq = 0.0;
    const long stop = std::min(cfg.n_traj, base + kChunk);
    for (long traj = base; traj < stop; ++traj) {
      std::mt19937_64 gen(splitmix64(cfg.seed, static_cast<std::uint64_t>(traj)));
      normal.reset();
      double q = cfg.q0, p = cfg.p0;
      double p2_window = 0.0, slope = 0.0;
      std::size_t s = 0;
      for (long step = 0; step <= cfg.n_steps; ++step) {
        if (step % cfg.sample_every == 0) {
          const double dq = q - cfg.q0;
          Accum& a = chunk[s];
          a.p += p;
          a.p2 += p * p;
          a.p4 += p * p * p * p;
          a.q += q;
          a.q2 += q * q;
          a.msd += dq * dq;
          a.msd2 += dq * dq * dq * dq;
          if (in_window[s]) {
            p2_window += p * p;
            slope += slope_w[s] * dq * dq;
          }
          ++s;
        }
        if (step == cfg.n_steps) break;
        double dw = 0.0;
        for (int k = 0; k < r; ++k) dw += normal(gen);
        const double p_new = decay * p + kick * dw;
        q += drift * p;
        p = p_new;
      }
      const double avg = window.empty() ? 0.0 : p2_window / static_cast<double>(window.size());
      c_stat += avg;
      c_stat_sq += avg * avg;
      c_slope += slope;
      c_slope_sq += slope * slope;
    }
    for (std::size_t k = 0; k < total.size(); ++k) total[k].add(chunk[k]);
    stat_sum += c_stat;
    stat_sq += c_stat_sq;
    slope_sum += c_slope;
    slope_sq += c_slope_sq;
  }

  const double n = static_cast<double>(cfg.n_traj);
  res.samples.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Accum& a = total[k];
    LangevinSample o;
    o.t = times[k];
    o.mean_p = a.p / n;
    o.mean_p_se = stderr_of(a.p, a.p2, n);
    o.p2 = a.p2 / n;
    o.p2_se = stderr_of(a.p2, a.p4, n);
    o.var_p = o.p2 - o.mean_p * o.mean_p;
    o.mean_q = a.q / n;
    o.var_q = a.q2 / n - o.mean_q * o.mean_q;
    o.msd = a.msd / n;
    o.msd_se = stderr_of(a.msd, a.msd2, n);
    res.samples.push_back(o);
  }
  res.stationary_p2 = stat_sum / n;
  res.stationary_p2_se = stderr_of(stat_sum, stat_sq, n);
  res.msd_slope = slope_sum / n;
  res.msd_slope_se = stderr_of(slope_sum, slope_sq, n);
  return res;
}

Correspondence correspondence_map(const BathSpec& bath, long n_traj, std::uint64_t seed) {
  Correspondence c;
  auto& cfg = c.config;
  cfg.gamma_cl = 2.0 * bath.gamma();
  cfg.T = bath.T();
  cfg.M = bath.M();
  cfg.kB = bath.kB();
  cfg.dt = 0.01 / cfg.gamma_cl;
  cfg.n_steps = 2000;
  cfg.n_traj = n_traj;
  cfg.seed = seed;
  cfg.sample_every = 10;
  if (bath.theta() < 50.0) {
    c.warnings.push_back("theta = " + std::to_string(bath.theta()) +
                         " < 50: quantum corrections to the classical map are not negligible");
  }
  return c;
}

double ou_mean_p(const LangevinConfig& cfg, double t) { return cfg.p0 * std::exp(-cfg.gamma_cl * t); }
double ou_stationary_p2(const LangevinConfig& cfg) { return cfg.M * cfg.kB * cfg.T; }
double ou_msd_slope(const LangevinConfig& cfg) { return 2.0 * cfg.kB * cfg.T / (cfg.M * cfg.gamma_cl); }
double em_stationary_p2(const LangevinConfig& cfg) {
  return ou_stationary_p2(cfg) / (1.0 - 0.5 * cfg.gamma_cl * cfg.dt);
}

}  // namespace qbm::langevin
