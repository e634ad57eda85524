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

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sossubmod/quotient.hpp"
#include "sossubmod/solver.hpp"

namespace sossubmod {

/// PSD Gram matrix Q with target == z' Q z modulo the ring's ideal.
struct GramCertificate {
  Ring ring;
  int t = 0;
  std::vector<Monomial> basis;
  Eigen::MatrixXd Q;
  double residual = 0.0;
  double min_eigenvalue = 0.0;
};

enum class SosVerdict { SOS, NOT_SOS, INDETERMINATE };

const char* to_string(SosVerdict v);

struct SosResult {
  SosVerdict verdict = SosVerdict::INDETERMINATE;
  double margin = 0.0;       // primal optimum s* (infinite if a target monomial is unreachable)
  double lower_bound = 0.0;  // dual bound on s*
  std::optional<GramCertificate> certificate;
  SolveStatus solver_status = SolveStatus::NUMERICAL_TROUBLE;
  int iterations = 0;
  std::string diagnostics;
};

/// Gram block registered in a conic problem: basis plus, for every product
/// monomial, the matrix terms whose sum equals its coefficient in z' Q z.
struct GramBlock {
  int block = -1;
  Ring ring;
  std::vector<Monomial> basis;
  std::map<std::uint64_t, std::vector<MatrixTerm>> products;
};

GramBlock add_gram_block(ConicProblem& problem, const Ring& ring, int t);

// Solves min s s.t. Q + s I PSD, target == z' Q z, and adjudicates the verdict
// with the tolerance bands of `tol`.
SosResult sos_feasibility_margin(const QuotientPoly& target, int t, const ToleranceProfile& tol = {});

// Max coefficient mismatch between target and z' Q z (Q used as given).
double gram_residual(const QuotientPoly& target, const std::vector<Monomial>& basis, const Eigen::MatrixXd& Q);

// Symmetrizes and clips negative eigenvalues at zero.
Eigen::MatrixXd psd_projection(const Eigen::MatrixXd& Q, double* min_eigenvalue = nullptr);

// Independent re-check of a certificate against a target.
bool verify_certificate(const QuotientPoly& target, const GramCertificate& cert, const ToleranceProfile& tol,
                        double* residual = nullptr);

double coefficient_scale(const QuotientPoly& target);

}  // namespace sossubmod
