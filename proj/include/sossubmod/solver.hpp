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

#include <string>
#include <vector>

namespace sossubmod {

/// Numerical tolerances shared by the solver and the certificate checks.
struct ToleranceProfile {
  double eq_abs = 1e-8;        // relative primal/dual infeasibility at optimality
  double gap_rel = 1e-8;       // relative duality gap at optimality
  double psd_eig = 1e-9;       // smallest eigenvalue accepted as PSD
  double feas_scale = 1e-7;    // t-sos when margin <= feas_scale (1 + max|coeff|)
  double infeas_scale = 1e-5;  // not t-sos when margin >= infeas_scale (1 + max|coeff|)
  double verify_scale = 1e-6;  // certificate residual bound, same scaling
  int max_iterations = 100;
};

// A term value * X_block(i, j) with i <= j. For i < j the constraint matrix
// receives value / 2 in both symmetric positions.
struct MatrixTerm {
  int block = 0;
  int i = 0;
  int j = 0;
  double value = 0.0;
};

struct LinearTerm {
  int index = 0;
  double value = 0.0;
};

struct ConstraintRow {
  std::vector<MatrixTerm> matrix_terms;
  std::vector<LinearTerm> nonneg_terms;
  std::vector<LinearTerm> free_terms;
  double rhs = 0.0;
};

/// min  sum <C_k, X_k> + c_w' w + c_u' u + 1/2 u' P u
/// s.t. sum A_k(X_k) + A_w w + B u = b,  X_k PSD,  w >= 0,  u free.
struct ConicProblem {
  std::vector<int> block_sizes;
  int num_nonneg = 0;
  int num_free = 0;
  std::vector<MatrixTerm> objective_matrix;
  std::vector<double> objective_nonneg;
  std::vector<double> objective_free;
  Eigen::MatrixXd quadratic;  // P, num_free x num_free or empty
  std::vector<ConstraintRow> rows;

  int add_block(int size);
  int add_nonneg(int count);
  int add_free(int count);
  int num_rows() const { return static_cast<int>(rows.size()); }
  void validate() const;
};

enum class SolveStatus { OPTIMAL, INFEASIBLE, UNBOUNDED, NUMERICAL_TROUBLE };

const char* to_string(SolveStatus s);

struct ConicSolution {
  SolveStatus status = SolveStatus::NUMERICAL_TROUBLE;
  std::vector<Eigen::MatrixXd> X;
  std::vector<double> nonneg;
  std::vector<double> free;
  std::vector<double> y;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double relative_gap = 0.0;
  int iterations = 0;
  std::string message;
};

ConicSolution solve(const ConicProblem& problem, const ToleranceProfile& tol = {});

}  // namespace sossubmod
