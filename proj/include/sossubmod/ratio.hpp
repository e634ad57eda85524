// Copyright 2026 The sossubmod Authors.
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

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sossubmod/families.hpp"
#include "sossubmod/setfn.hpp"
#include "sossubmod/solver.hpp"

namespace sossubmod {

/// Raised when an input is not nonnegative and nondecreasing on the vertices.
class NotMonotoneError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Checks f >= 0 and f(S) <= f(S + i) on every vertex; throws NotMonotoneError
// naming the first violation.
void check_monotone_nonnegative(const SetFunction& f);

// Exact submodularity ratio by enumeration of the 3^n ordered pairs x <= y.
// +infinity when no pair constrains gamma (constant f).
double gamma_star_bruteforce(const SetFunction& f);

// n (lambda_min - 1) / (prod lambda - 1) for the eigenvalues of I + Sigma / sigma^2.
double gamma_spectral(const RationalMatrix& sigma_matrix, const Rational& sigma);

struct GammaBound {
  double gamma = 0.0;  // -inf if infeasible, +inf if unbounded
  int k = 0;
  int t = 0;
  double m = 0.0;
  double M = 0.0;
  SolveStatus status = SolveStatus::NUMERICAL_TROUBLE;
  int iterations = 0;
  double residual = 0.0;  // Gram residual of the returned gamma
  double seconds = 0.0;
};

class RatioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

GammaBound gamma_tsos(const SetFunction& f, int t, const ToleranceProfile& tol = {});

// (m, M) for the truncation remainder F - F_k by vertex enumeration, with
// m clamped at <= 0. Valid because the partials of a multilinear polynomial
// attain their extrema over [0,1]^n at vertices.
std::pair<double, double> truncation_bounds(const SetFunction& f, int k);

// Determinantal closed form: m = 0 and M = det(I + Sigma / sigma^2) - F_k(1).
std::pair<Rational, Rational> determinantal_m_M(const RationalMatrix& sigma_matrix, const Rational& sigma, int k);

// Requires ceil(k/2) <= t <= ceil((n+k-1)/2). When m or M are not given they are
// computed with truncation_bounds.
GammaBound gamma_trunc_sos(const SetFunction& f, int k, int t, std::optional<double> m = std::nullopt,
                           std::optional<double> M = std::nullopt, const ToleranceProfile& tol = {});

struct RatioResult {
  std::optional<double> gamma_star;
  std::optional<double> gamma_spectral;
  std::vector<GammaBound> tsos;
  std::vector<GammaBound> trunc;
};

}  // namespace sossubmod
