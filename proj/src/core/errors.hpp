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

#include <stdexcept>
#include <string>

namespace qbm {

/// Base class of every error raised by the numerical core.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the domain of an operation (negative temperature, tau < 0,
/// series outside its convergence region, grid too small, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// chi = hbar*omega_c/(2 kB T) sits within the guard band of a Matsubara
/// pole n*pi; the closed-form kernel series is undefined there.
class ResonanceError : public DomainError {
 public:
  ResonanceError(const std::string& what, int n) : DomainError(what), n_(n) {}
  int order() const noexcept { return n_; }

 private:
  int n_;
};

/// Failure of a numerical procedure to reach its tolerance or to stay finite.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature / series acceleration ran out of budget.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double estimate, double error)
      : NumericalError(what), estimate_(estimate), error_(error) {}
  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

}  // namespace qbm
