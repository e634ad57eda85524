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

#include "sossubmod/ratio.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "sossubmod/quotient.hpp"
#include "sossubmod/sos.hpp"

namespace sossubmod {

namespace {

QuotientPoly difference(const Ring& ring, int i) {
  QuotientPoly p(ring);
  Monomial a, b;
  a.set(i, Tag::Y);
  b.set(i, Tag::X);
  p.add_term(a, 1);
  p.add_term(b, -1);
  return p;
}

int ceil_half(int a) { return a <= 0 ? 0 : (a + 1) / 2; }

}  // namespace

void check_monotone_nonnegative(const SetFunction& f) {
  check_capacity(f.n(), kMaxEnumerationN, "monotonicity check");
  const std::vector<double> v = values_from_mle_d(f);
  const double tol = 1e-9 * (1.0 + std::abs(*std::max_element(v.begin(), v.end())));
  for (std::uint32_t s = 0; s < v.size(); ++s) {
    if (v[s] < -tol) throw NotMonotoneError("f(" + std::to_string(s) + ") is negative");
    for (int i = 0; i < f.n(); ++i) {
      if (s & (1u << i)) continue;
      if (v[s | (1u << i)] < v[s] - tol) {
        throw NotMonotoneError("f decreases when adding element " + std::to_string(i) + " to mask " +
                               std::to_string(s));
      }
    }
  }
}

double gamma_star_bruteforce(const SetFunction& f) {
  check_capacity(f.n(), kMaxPairwiseN, "gamma_star_bruteforce");
  check_monotone_nonnegative(f);
  const int n = f.n();
  const std::vector<double> v = values_from_mle_d(f);
  const double tol = 1e-9 * (1.0 + std::abs(v.back()));
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t y = 0; y < v.size(); ++y) {
    // x ranges over proper submasks of y.
    for (std::uint32_t x = (y - 1) & y;; x = (x - 1) & y) {
      if (x != y) {
        const std::uint32_t l = y & ~x;
        double num = 0.0;
        for (std::uint32_t b = l; b; b &= b - 1) num += v[x | (b & -b)] - v[x];
        const double den = v[y] - v[x];
        if (den > tol) {
          best = std::min(best, num / den);
        } else if (num < -tol) {
          throw NotMonotoneError("negative marginal sum on a flat pair");
        }
      }
      if (x == 0) break;
    }
  }
  (void)n;
  return best;
}

double gamma_spectral(const RationalMatrix& sigma_matrix, const Rational& sigma) {
  if (!is_symmetric_positive_definite(sigma_matrix)) throw std::invalid_argument("Sigma must be SPD");
  if (sigma <= 0) throw std::invalid_argument("sigma must be positive");
  const int n = static_cast<int>(sigma_matrix.size());
  const double s2 = sigma.get_d() * sigma.get_d();
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = (i == j ? 1.0 : 0.0) + sigma_matrix[i][j].get_d() / s2;
  }
  const Eigen::VectorXd lambda = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues();
  const double lambda_min = lambda.minCoeff();
  const double prod = lambda.prod();
  if (n == 1) return 1.0;
  return n * (lambda_min - 1.0) / (prod - 1.0);
}

std::pair<double, double> truncation_bounds(const SetFunction& f, int k) {
  check_capacity(f.n(), kMaxEnumerationN, "truncation_bounds");
  const SetFunction rest = f - truncate(f, k);
  if (rest.is_zero()) return {0.0, 0.0};
  const std::vector<double> v = values_from_mle_d(rest);
  double lo = 0.0;
  double hi = 0.0;
  for (std::uint32_t s = 0; s < v.size(); ++s) {
    for (int i = 0; i < f.n(); ++i) {
      if (s & (1u << i)) continue;
      const double d = v[s | (1u << i)] - v[s];
      lo = std::min(lo, d);
      hi = std::max(hi, std::abs(d));
    }
  }
  return {lo, hi};
}

std::pair<Rational, Rational> determinantal_m_M(const RationalMatrix& sigma_matrix, const Rational& sigma, int k) {
  const int n = static_cast<int>(sigma_matrix.size());
  if (k < 0 || k > n) throw std::invalid_argument("determinantal_m_M requires 0 <= k <= n");
  const SetFunction F = build(family::Determinantal{sigma_matrix, sigma});
  RationalMatrix shifted = sigma_matrix;
  const Rational inv = 1 / (sigma * sigma);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) shifted[i][j] = (i == j ? Rational(1) : Rational(0)) + sigma_matrix[i][j] * inv;
  }
  const Rational total = determinant(shifted);
  const SetFunction Fk = truncate(F, k);
  Rational at_ones = 0;
  for (const auto& [mask, c] : Fk.terms()) at_ones += c;
  return {Rational(0), total - at_ones};
}

GammaBound gamma_trunc_sos(const SetFunction& f, int k, int t, std::optional<double> m, std::optional<double> M,
                           const ToleranceProfile& tol) {
  const int n = f.n();
  if (k < 0 || k > n) throw std::invalid_argument("gamma_trunc_sos requires 0 <= k <= n");
  if (t < ceil_half(k) || t > ceil_half(n + k - 1)) {
    throw std::invalid_argument("t outside [ceil(k/2), ceil((n+k-1)/2)]");
  }
  check_monotone_nonnegative(f);
  if (!m || !M) {
    const auto [lo, hi] = truncation_bounds(f, k);
    if (!m) m = lo;
    if (!M) M = hi;
  }
  if (*m > 0 || *M < 0) throw std::invalid_argument("need m <= 0 <= M");
  const auto start = std::chrono::steady_clock::now();

  const SetFunction Fk = truncate(f, k);
  const Ring ring = Ring::i1(n);
  const auto xs = uniform_substitution(n, Affine::x());
  const auto ys = uniform_substitution(n, Affine::y());
  const Rational mq = rational_from_double(*m);
  const Rational Mq = rational_from_double(*M);
  QuotientPoly p0(ring);
  QuotientPoly p1 = embed_setfunction(Fk, xs, ring) - embed_setfunction(Fk, ys, ring);
  for (int i = 0; i < n; ++i) {
    const QuotientPoly d = difference(ring, i);
    p0 = p0 + d * (embed_setfunction(partial(Fk, i), xs, ring) + QuotientPoly(ring, mq));
    p1 = p1 - d.scaled(Mq);
  }

  ConicProblem problem;
  GramBlock g = add_gram_block(problem, ring, t);
  const int gamma = problem.add_free(1);
  problem.objective_free[gamma] = -1.0;
  std::set<std::uint64_t> codes;
  for (const auto& [code, terms] : g.products) codes.insert(code);
  for (const auto& [code, c] : p0.terms()) codes.insert(code);
  for (const auto& [code, c] : p1.terms()) codes.insert(code);
  for (std::uint64_t code : codes) {
    ConstraintRow row;
    if (auto it = g.products.find(code); it != g.products.end()) row.matrix_terms = it->second;
    const double c1 = p1.coeff(Monomial{code}).get_d();
    if (c1 != 0.0) row.free_terms.push_back({gamma, -c1});
    row.rhs = p0.coeff(Monomial{code}).get_d();
    if (row.matrix_terms.empty() && row.free_terms.empty()) {
      if (row.rhs != 0.0) {
        GammaBound out{-std::numeric_limits<double>::infinity(), k, t, *m, *M, SolveStatus::INFEASIBLE};
        return out;
      }
      continue;
    }
    problem.rows.push_back(std::move(row));
  }

  const ConicSolution sol = solve(problem, tol);
  GammaBound out{0.0, k, t, *m, *M, sol.status, sol.iterations};
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  switch (sol.status) {
    case SolveStatus::INFEASIBLE:
      out.gamma = -std::numeric_limits<double>::infinity();
      return out;
    case SolveStatus::UNBOUNDED:
      out.gamma = std::numeric_limits<double>::infinity();
      return out;
    case SolveStatus::NUMERICAL_TROUBLE:
      if (sol.primal_infeasibility > 1e-6 || sol.dual_infeasibility > 1e-6) {
        throw RatioError("ratio SDP indeterminate: " + sol.message);
      }
      break;
    case SolveStatus::OPTIMAL:
      break;
  }
  out.gamma = sol.free[gamma];
  const QuotientPoly target = p0 + p1.scaled(rational_from_double(out.gamma));
  out.residual = gram_residual(target, g.basis, psd_projection(sol.X[g.block]));
  return out;
}

GammaBound gamma_tsos(const SetFunction& f, int t, const ToleranceProfile& tol) {
  const int d = f.degree();
  return gamma_trunc_sos(f, d, t, 0.0, 0.0, tol);
}

}  // namespace sossubmod
