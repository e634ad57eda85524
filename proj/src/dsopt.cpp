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

#include "sossubmod/dsopt.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sossubmod/rng.hpp"

namespace sossubmod {

namespace {

Rational binomial2(int k) { return Rational(k * (k - 1) / 2); }

// Weights and constant of a chain subgradient from a value oracle.
template <typename Value>
SetFunction chain_subgradient(int n, SubsetMask t, const Permutation& pi, Value&& value) {
  if (!is_permutation(pi, n)) throw std::invalid_argument("subgradient: not a permutation");
  std::uint32_t prefix = 0;
  for (int k = 0; k < t.size(); ++k) prefix |= 1u << pi[k];
  if (prefix != t.bits) throw std::invalid_argument("subgradient: permutation does not list T first");
  SetFunction::Terms terms;
  Rational prev = value(0u);
  terms[0] = prev;
  std::uint32_t chain = 0;
  for (int k = 0; k < n; ++k) {
    chain |= 1u << pi[k];
    Rational cur = value(chain);
    terms[1u << pi[k]] = cur - prev;
    prev = std::move(cur);
  }
  return SetFunction(n, std::move(terms));
}

SetFunction pairwise_sum(int n, const Rational& v) {
  SetFunction::Terms terms;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) terms[(1u << i) | (1u << j)] = v;
  }
  return SetFunction(n, std::move(terms));
}

}  // namespace

const char* to_string(DecompositionKind k) {
  return k == DecompositionKind::TRIVIAL ? "trivial" : "tsos";
}

Decomposition trivial_decomposition(const SetFunction& f) {
  SetFunction::Terms g;
  SetFunction::Terms h;
  for (const auto& [mask, c] : f.terms()) {
    if (std::popcount(mask) <= 1 || c < 0) {
      g[mask] = c;
    } else {
      h[mask] = -c;
    }
  }
  Decomposition d;
  d.G = SetFunction(f.n(), std::move(g));
  d.H = SetFunction(f.n(), std::move(h));
  d.kind = DecompositionKind::TRIVIAL;
  return d;
}

Rational curvature_objective(const SetFunction& h) {
  Rational total = 0;
  const int n = h.n();
  for (const auto& [mask, c] : h.terms()) {
    const int k = std::popcount(mask);
    if (k < 2) continue;
    mpz_class weight;
    mpz_ui_pow_ui(weight.get_mpz_t(), 2, static_cast<unsigned long>(n - k + 2));
    total += c * binomial2(k) * Rational(weight);
  }
  return total;
}

Decomposition tsos_irreducible_decomposition(const SetFunction& f, int t, const ToleranceProfile& tol) {
  const int n = f.n();
  const int d = f.degree();
  const int t_needed = 2 * ((d + 1) / 2) - 2;
  if (t < std::max(0, t_needed)) throw std::invalid_argument("t below 2 ceil(d/2) - 2");
  check_capacity(n, kMaxPairwiseN, "tsos_irreducible_decomposition");
  const auto start = std::chrono::steady_clock::now();

  std::vector<std::uint32_t> masks;
  for (std::uint32_t m = 0; m <= SubsetMask::full(n).bits; ++m) {
    const int k = std::popcount(m);
    if (k >= 2 && k <= std::max(d, 2)) masks.push_back(m);
  }
  ConicProblem problem;
  const int first = problem.add_free(static_cast<int>(masks.size()));
  std::vector<CoefficientVar> vars;
  for (std::size_t k = 0; k < masks.size(); ++k) {
    vars.push_back({masks[k], first + static_cast<int>(k), 1.0});
    // Curvature weight divided by 2^n; the maximizer is unchanged.
    const int size = std::popcount(masks[k]);
    problem.objective_free[first + k] = -(size * (size - 1) / 2.0) * std::ldexp(1.0, 2 - size);
  }
  const auto grams_h = add_tsos_submodularity(problem, n, t, SetFunction(n), vars);
  const auto grams_g = add_tsos_submodularity(problem, n, t, f, vars);

  const ConicSolution sol = solve(problem, tol);
  const bool usable = sol.status == SolveStatus::OPTIMAL ||
                      (sol.status == SolveStatus::NUMERICAL_TROUBLE && sol.primal_infeasibility <= 1e-6 &&
                       sol.dual_infeasibility <= 1e-6);
  if (!usable) {
    throw DecompositionError(std::string("decomposition SDP failed: ") + to_string(sol.status) + " " + sol.message);
  }

  SetFunction::Terms h_terms;
  double largest = 0.0;
  for (std::size_t k = 0; k < masks.size(); ++k) {
    const double v = sol.free[first + k];
    largest = std::max(largest, std::abs(v));
    if (v != 0.0) h_terms[masks[k]] = rational_from_double(v);
  }
  Decomposition dec;
  dec.kind = DecompositionKind::TSOS_IRREDUCIBLE;
  dec.t = t;
  dec.H = SetFunction(n, std::move(h_terms));
  dec.G = f + dec.H;

  // Remove solver-level violations from both parts at once, which keeps F = G - H.
  Rational worst = max_second_derivative(dec.H);
  const Rational worst_g = max_second_derivative(dec.G);
  if (worst_g > worst) worst = worst_g;
  double scale = 1.0 + largest;
  for (const auto& [mask, c] : f.terms()) scale = std::max(scale, 1.0 + std::abs(c.get_d()));
  if (worst > 0) {
    if (worst.get_d() > tol.verify_scale * scale) {
      throw DecompositionError("decomposition is not submodular beyond tolerance");
    }
    const SetFunction shift = pairwise_sum(n, worst);
    dec.H = dec.H - shift;
    dec.G = f + dec.H;
    dec.repair_shift = worst.get_d();
  }
  dec.certificate_h = report_from_solution(dec.H, t, grams_h, sol, tol);
  dec.certificate_g = report_from_solution(dec.G, t, grams_g, sol, tol);
  dec.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return dec;
}

bool is_permutation(const Permutation& pi, int n) {
  if (static_cast<int>(pi.size()) != n) return false;
  std::vector<bool> seen(n, false);
  for (int v : pi) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

SetFunction subgradient(const SetFunction& h, SubsetMask t, const Permutation& pi) {
  return chain_subgradient(h.n(), t, pi, [&](std::uint32_t m) { return h.value(SubsetMask(m)); });
}

SetFunction subgradient(const ValueTable& h, SubsetMask t, const Permutation& pi) {
  return chain_subgradient(h.n, t, pi, [&](std::uint32_t m) { return h.values[m]; });
}

Permutation random_extension(SubsetMask s, int n, std::uint64_t seed) {
  Permutation pi;
  for (int i = 0; i < n; ++i) {
    if (s.contains(i)) pi.push_back(i);
  }
  const std::size_t head = pi.size();
  for (int i = 0; i < n; ++i) {
    if (!s.contains(i)) pi.push_back(i);
  }
  Rng rng(seed);
  rng.shuffle(pi, 0, head);
  rng.shuffle(pi, head, pi.size());
  return pi;
}

bool is_local_minimum(const std::vector<double>& values, int n, SubsetMask s) {
  const double here = values[s.bits];
  for (int i = 0; i < n; ++i) {
    if (values[s.bits ^ (1u << i)] < here - 1e-12) return false;
  }
  return true;
}

bool is_local_minimum(const SetFunction& f, SubsetMask s) {
  const Rational here = f.value(s);
  for (int i = 0; i < f.n(); ++i) {
    if (Rational(f.value(SubsetMask(s.bits ^ (1u << i))) - here).get_d() < -1e-12) return false;
  }
  return true;
}

MinimumResult exact_min_bruteforce(const SetFunction& f) {
  check_capacity(f.n(), kMaxEnumerationN, "exact_min_bruteforce");
  const std::vector<double> v = values_from_mle_d(f);
  MinimumResult best{SubsetMask(0), v[0]};
  double scale = 1.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  for (std::uint32_t m = 1; m < v.size(); ++m) {
    if (v[m] < best.value - 1e-12 * scale) best = {SubsetMask(m), v[m]};
  }
  return best;
}

SspTrace ssp(const SetFunction& f, const Decomposition& dec, std::uint64_t seed, int max_iterations) {
  const int n = f.n();
  check_capacity(n, kMaxEnumerationN, "ssp");
  const std::vector<double> fv = values_from_mle_d(f);
  const std::vector<double> gv = values_from_mle_d(dec.G);
  const std::vector<double> hv = values_from_mle_d(dec.H);
  double scale = 1.0;
  for (double x : fv) scale = std::max(scale, std::abs(x));
  const double eps = 1e-12 * scale;

  SspTrace trace;
  trace.seed = seed;
  SubsetMask s(0);
  trace.iterates.push_back(s);
  trace.objective.push_back(fv[0]);
  for (int it = 0;; ++it) {
    if (is_local_minimum(fv, n, s)) {
      trace.termination = "local minimum";
      break;
    }
    if (it >= max_iterations) {
      trace.termination = "iteration limit";
      break;
    }
    const std::uint64_t pseed = derive_seed(seed, static_cast<std::uint64_t>(it));
    const Permutation pi = random_extension(s, n, pseed);
    // Modular minorant of h along the chain of pi.
    std::vector<double> w(n);
    double constant = hv[0];
    std::uint32_t chain = 0;
    for (int k = 0; k < n; ++k) {
      const std::uint32_t next = chain | (1u << pi[k]);
      w[pi[k]] = hv[next] - hv[chain];
      chain = next;
    }
    std::uint32_t best = 0;
    double best_val = gv[0] - constant;
    std::vector<double> lin(std::size_t{1} << n, 0.0);
    for (std::uint32_t m = 1; m < lin.size(); ++m) {
      lin[m] = lin[m & (m - 1)] + w[std::countr_zero(m)];
      const double val = gv[m] - constant - lin[m];
      if (val < best_val - eps) {
        best_val = val;
        best = m;
      }
    }
    trace.permutations.push_back(pi);
    trace.permutation_seeds.push_back(pseed);
    SubsetMask next(best);
    if (!(fv[next.bits] < fv[s.bits] - eps)) {
      // This permutation gives no strict decrease; stay and draw another one.
      next = s;
      ++trace.stalled_steps;
    }
    s = next;
    trace.iterates.push_back(s);
    trace.objective.push_back(fv[s.bits]);
  }
  return trace;
}

double relative_gap(double f, double f_opt) {
  if (f_opt == 0.0) return f - f_opt;
  return (f - f_opt) / std::abs(f_opt);
}

}  // namespace sossubmod
