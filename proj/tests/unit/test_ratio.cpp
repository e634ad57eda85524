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

#include <cmath>
#include <limits>

#include "doctest.h"
#include "sossubmod/families.hpp"
#include "sossubmod/ratio.hpp"

using namespace sossubmod;

namespace {

// Oracle: exact rational minimum over disjoint (A, B) of
// sum_{b in B} (f(A+b) - f(A)) / (f(A u B) - f(A)).
Rational naive_gamma(const SetFunction& f, bool& bounded) {
  const ValueTable v = values_from_mle(f);
  const std::uint32_t full = (1u << f.n()) - 1;
  bounded = false;
  Rational best = 0;
  for (std::uint32_t a = 0; a <= full; ++a) {
    for (std::uint32_t b = 1; b <= full; ++b) {
      if (a & b) continue;
      const Rational den = v.values[a | b] - v.values[a];
      if (den <= 0) continue;
      Rational num = 0;
      for (int i = 0; i < f.n(); ++i) {
        if ((b >> i) & 1u) num += v.values[a | (1u << i)] - v.values[a];
      }
      const Rational r = num / den;
      if (!bounded || r < best) best = r;
      bounded = true;
    }
  }
  return best;
}

SetFunction det_function(const RationalMatrix& sig, const Rational& sigma) { return build(family::Determinantal{sig, sigma}); }

}  // namespace

TEST_SUITE("ratio") {
  TEST_CASE("brute-force gamma matches an exact enumeration") {
    const std::vector<SetFunction> fs = {
        det_function(random_spd(4, 1), 2),
        build(family::Coverage{4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}}),
        build(family::MonotonizationWitness{3}),
        build(family::ConcaveCardinality{4, {1, 8, -1}}),
    };
    for (const auto& f : fs) {
      bool bounded = false;
      const Rational oracle = naive_gamma(f, bounded);
      REQUIRE(bounded);
      CHECK(gamma_star_bruteforce(f) == doctest::Approx(oracle.get_d()).epsilon(1e-12));
    }
  }

  TEST_CASE("additive and constant functions") {
    CHECK(gamma_star_bruteforce(SetFunction(3, {{1u, 2}, {2u, 1}, {4u, 5}})) == doctest::Approx(1.0));
    CHECK(std::isinf(gamma_star_bruteforce(SetFunction(3, {{0u, 1}}))));
  }

  TEST_CASE("non-monotone input is rejected") {
    CHECK_THROWS_AS(gamma_star_bruteforce(build(family::GraphCut{{{0, 1}, {1, 0}}})), NotMonotoneError);
    CHECK_THROWS_AS(check_monotone_nonnegative(SetFunction(2, {{0u, -1}, {1u, 2}})), NotMonotoneError);
  }

  TEST_CASE("sos lower bounds never exceed the true ratio") {
    const RationalMatrix sig = random_spd(5, 2);
    const SetFunction f = det_function(sig, 2);
    const double star = gamma_star_bruteforce(f);
    const auto [m, M] = determinantal_m_M(sig, 2, 3);
    const GammaBound trunc = gamma_trunc_sos(f, 3, 2, m.get_d(), M.get_d());
    REQUIRE(trunc.status == SolveStatus::OPTIMAL);
    CHECK(trunc.gamma <= star + 1e-6);
    CHECK(trunc.gamma > 0);
    const GammaBound full = gamma_tsos(f, 3);
    REQUIRE(full.status == SolveStatus::OPTIMAL);
    CHECK(full.gamma <= star + 1e-6);
    CHECK(gamma_spectral(sig, 2) <= star + 1e-9);
  }

  TEST_CASE("truncation bounds bracket the remainder marginals") {
    const SetFunction f = det_function(random_spd(4, 6), 1);
    const auto [m, M] = truncation_bounds(f, 2);
    const SetFunction rest = f - truncate(f, 2);
    CHECK(m <= 0);
    for (std::uint32_t s = 0; s < 16; ++s) {
      for (int i = 0; i < 4; ++i) {
        if ((s >> i) & 1u) continue;
        const double d = Rational(rest.value(SubsetMask(s | (1u << i))) - rest.value(SubsetMask(s))).get_d();
        CHECK(d >= m - 1e-12);
        CHECK(std::abs(d) <= M + 1e-12);
      }
    }
  }

  TEST_CASE("determinantal closed form for M") {
    const RationalMatrix sig = random_spd(4, 8);
    const SetFunction f = det_function(sig, 2);
    const auto [m, M] = determinantal_m_M(sig, 2, 2);
    CHECK(m == 0);
    // F(1) - F_2(1) is the sum of coefficients of size above 2.
    Rational tail = 0;
    for (const auto& [mask, c] : f.terms()) {
      if (std::popcount(mask) > 2) tail += c;
    }
    CHECK(M == tail);
  }

  TEST_CASE("spectral bound on a diagonal covariance") {
    const RationalMatrix diag = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    // lambda = 2 for all, n (2 - 1) / (8 - 1)
    CHECK(gamma_spectral(diag, 1) == doctest::Approx(3.0 / 7.0));
    CHECK_THROWS_AS(gamma_spectral({{1, 2}, {2, 1}}, 1), std::invalid_argument);
  }

  TEST_CASE("argument checks") {
    const SetFunction f = det_function(random_spd(4, 1), 2);
    CHECK_THROWS_AS(gamma_trunc_sos(f, 2, 5), std::invalid_argument);
    CHECK_THROWS_AS(gamma_trunc_sos(f, 2, 1, 0.5, 1.0), std::invalid_argument);
  }
}
