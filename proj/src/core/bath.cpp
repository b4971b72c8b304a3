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

#include "core/bath.hpp"

#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace qbm {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be positive and finite (got " << v << ")";
    throw DomainError(os.str());
  }
}

}  // namespace

void ParticleParams::validate() const {
  require_positive(M, "M");
  require_positive(gamma, "gamma");
  require_positive(scales.hbar, "hbar");
  require_positive(scales.kB, "kB");
}

BathSpec::BathSpec(double M, double gamma, double omega_c, double T, Scales scales)
    : M_(M), gamma_(gamma), omega_c_(omega_c), T_(T), scales_(scales) {
  require_positive(M, "M");
  require_positive(gamma, "gamma");
  require_positive(omega_c, "omega_c");
  require_positive(T, "T");
  require_positive(scales.hbar, "hbar");
  require_positive(scales.kB, "kB");
  if (gamma / omega_c > 0.1) {
    std::ostringstream os;
    os << "gamma/omega_c = " << gamma / omega_c
       << " > 0.1: the local effective action assumes gamma << omega_c";
    warnings_.push_back(os.str());
  }
}

BathSpec BathSpec::from_theta(double theta, double omega_c, ParticleParams p) {
  require_positive(theta, "theta");
  const double T = theta * p.scales.hbar * p.gamma / p.scales.kB;
  return {p.M, p.gamma, omega_c, T, p.scales};
}

BathSpec BathSpec::from_chi(double chi, double omega_c, ParticleParams p) {
  require_positive(chi, "chi");
  const double T = p.scales.hbar * omega_c / (2.0 * p.scales.kB * chi);
  return {p.M, p.gamma, omega_c, T, p.scales};
}

}  // namespace qbm
