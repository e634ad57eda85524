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

#include "sossubmod/sos.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <set>

namespace sossubmod {

const char* to_string(SosVerdict v) {
  switch (v) {
    case SosVerdict::SOS:
      return "SOS";
    case SosVerdict::NOT_SOS:
      return "NOT_SOS";
    case SosVerdict::INDETERMINATE:
      return "INDETERMINATE";
  }
  return "UNKNOWN";
}

GramBlock add_gram_block(ConicProblem& problem, const Ring& ring, int t) {
  GramBlock g;
  g.ring = ring;
  g.basis = basis(ring, t);
  g.block = problem.add_block(static_cast<int>(g.basis.size()));
  const int size = static_cast<int>(g.basis.size());
  for (int a = 0; a < size; ++a) {
    for (int b = a; b < size; ++b) {
      const Monomial m = multiply_monomials(g.basis[a], g.basis[b], ring.kind);
      g.products[m.code].push_back(MatrixTerm{g.block, a, b, a == b ? 1.0 : 2.0});
    }
  }
  return g;
}

double coefficient_scale(const QuotientPoly& target) { return 1.0 + target.max_abs_coeff().get_d(); }

Eigen::MatrixXd psd_projection(const Eigen::MatrixXd& Q, double* min_eigenvalue) {
  const Eigen::MatrixXd S = 0.5 * (Q + Q.transpose());
  if (S.rows() == 0) {
    if (min_eigenvalue) *min_eigenvalue = 0.0;
    return S;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (min_eigenvalue) *min_eigenvalue = es.eigenvalues()(0);
  const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
}

double gram_residual(const QuotientPoly& target, const std::vector<Monomial>& basis, const Eigen::MatrixXd& Q) {
  std::map<std::uint64_t, double> expanded;
  const int size = static_cast<int>(basis.size());
  for (int a = 0; a < size; ++a) {
    for (int b = a; b < size; ++b) {
      const Monomial m = multiply_monomials(basis[a], basis[b], target.ring().kind);
      expanded[m.code] += a == b ? Q(a, a) : Q(a, b) + Q(b, a);
    }
  }
  for (const auto& [code, c] : target.terms()) expanded[code] -= c.get_d();
  double worst = 0.0;
  for (const auto& [code, v] : expanded) worst = std::max(worst, std::abs(v));
  return worst;
}

bool verify_certificate(const QuotientPoly& target, const GramCertificate& cert, const ToleranceProfile& tol,
                        double* residual) {
  double lmin = 0.0;
  const Eigen::MatrixXd P = psd_projection(cert.Q, &lmin);
  const double r = gram_residual(target, cert.basis, P);
  if (residual) *residual = r;
  return r <= tol.verify_scale * coefficient_scale(target);
}

SosResult sos_feasibility_margin(const QuotientPoly& target, int t, const ToleranceProfile& tol) {
  SosResult out;
  const Ring& ring = target.ring();
  const double scale = coefficient_scale(target);
  if (t < 0) throw std::invalid_argument("sos degree must be nonnegative");

  if (target.is_zero()) {
    GramCertificate cert;
    cert.ring = ring;
    cert.t = t;
    cert.basis = basis(ring, t);
    cert.Q = Eigen::MatrixXd::Zero(cert.basis.size(), cert.basis.size());
    out.verdict = SosVerdict::SOS;
    out.certificate = std::move(cert);
    out.solver_status = SolveStatus::OPTIMAL;
    out.diagnostics = "zero target";
    return out;
  }

  ConicProblem problem;
  GramBlock g = add_gram_block(problem, ring, t);
  for (const auto& [code, c] : target.terms()) {
    if (!g.products.count(code)) {
      out.verdict = SosVerdict::NOT_SOS;
      out.margin = std::numeric_limits<double>::infinity();
      out.lower_bound = out.margin;
      out.diagnostics = "target monomial " + Monomial{code}.to_string() + " has degree above 2t";
      return out;
    }
  }
  const int s_index = problem.add_free(1);
  problem.objective_free[s_index] = 1.0;
  std::set<std::uint64_t> in_basis;
  for (const auto& m : g.basis) in_basis.insert(m.code);
  for (const auto& [code, terms] : g.products) {
    ConstraintRow row;
    row.matrix_terms = terms;
    if (in_basis.count(code)) row.free_terms.push_back({s_index, -1.0});
    row.rhs = target.coeff(Monomial{code}).get_d();
    problem.rows.push_back(std::move(row));
  }

  const ConicSolution sol = solve(problem, tol);
  out.solver_status = sol.status;
  out.iterations = sol.iterations;
  out.margin = sol.primal_objective;
  out.lower_bound = sol.dual_objective;
  const bool usable = sol.status == SolveStatus::OPTIMAL ||
                      (sol.status == SolveStatus::NUMERICAL_TROUBLE && sol.primal_infeasibility <= 1e-6 &&
                       sol.dual_infeasibility <= 1e-6);
  if (!usable) {
    out.verdict = SosVerdict::INDETERMINATE;
    out.diagnostics = std::string("solver status ") + to_string(sol.status) + ": " + sol.message;
    return out;
  }
  if (out.margin <= tol.feas_scale * scale) {
    GramCertificate cert;
    cert.ring = ring;
    cert.t = t;
    cert.basis = g.basis;
    const Eigen::MatrixXd raw =
        sol.X[g.block] - sol.free[s_index] * Eigen::MatrixXd::Identity(g.basis.size(), g.basis.size());
    cert.Q = psd_projection(raw, &cert.min_eigenvalue);
    cert.residual = gram_residual(target, cert.basis, cert.Q);
    if (cert.residual <= tol.verify_scale * scale) {
      out.verdict = SosVerdict::SOS;
      out.certificate = std::move(cert);
    } else {
      out.verdict = SosVerdict::INDETERMINATE;
      out.diagnostics = "certificate failed re-verification (residual " + std::to_string(cert.residual) + ")";
    }
    return out;
  }
  if (out.lower_bound >= tol.infeas_scale * scale) {
    out.verdict = SosVerdict::NOT_SOS;
    return out;
  }
  out.verdict = SosVerdict::INDETERMINATE;
  out.diagnostics = "margin inside the indeterminate band";
  return out;
}

}  // namespace sossubmod
