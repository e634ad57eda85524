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

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "sossubmod/families.hpp"
#include "sossubmod/rng.hpp"
#include "sossubmod/setfn.hpp"

using namespace sossubmod;

namespace {

// Oracle: value at a vertex is the sum of coefficients of subsets of S.
Rational direct_value(const SetFunction& f, std::uint32_t s) {
  Rational v = 0;
  for (const auto& [mask, c] : f.terms()) {
    if ((mask & ~s) == 0) v += c;
  }
  return v;
}

// Oracle: f(S) + f(T) >= f(S | T) + f(S & T) for every pair.
bool lattice_submodular(const std::vector<Rational>& v, int n) {
  const std::uint32_t full = (1u << n) - 1;
  for (std::uint32_t a = 0; a <= full; ++a) {
    for (std::uint32_t b = 0; b <= full; ++b) {
      if (v[a] + v[b] < v[a | b] + v[a & b]) return false;
    }
  }
  return true;
}

ValueTable random_table(int n, Rng& rng) {
  std::vector<Rational> vals;
  for (std::uint32_t s = 0; s < (1u << n); ++s) vals.push_back(Rational(static_cast<long>(rng.below(201)) - 100) / 7);
  return ValueTable(n, vals);
}

SetFunction pairwise(int n, const Rational& v) {
  SetFunction::Terms t;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) t[(1u << i) | (1u << j)] = v;
  }
  return SetFunction(n, t);
}

SetFunction k2() { return SetFunction(2, {{1u, 1}, {2u, 1}, {3u, -2}}); }

}  // namespace

TEST_SUITE("setfn") {
  TEST_CASE("zero coefficients are dropped and equality is map equality") {
    const SetFunction a(3, {{1u, 2}, {6u, 0}});
    const SetFunction b(3, {{1u, Rational(4) / 2}});
    CHECK(a == b);
    CHECK(a.terms().size() == 1);
    CHECK(a.degree() == 1);
    CHECK((a - b).is_zero());
  }

  TEST_CASE("vertex values match direct subset sums") {
    const SetFunction f = random_setfunction(6, 4, -5, 5, 11);
    const ValueTable v = values_from_mle(f);
    for (std::uint32_t s = 0; s < 64; ++s) CHECK(v.values[s] == direct_value(f, s));
  }

  TEST_CASE("Moebius round trip is exact") {
    Rng rng(3);
    for (int n = 0; n <= 7; ++n) {
      const ValueTable v = random_table(n, rng);
      const SetFunction f = mle_from_values(v);
      CHECK(values_from_mle(f).values == v.values);
      // Oracle: a(T) = sum_{S subset T} (-1)^{|T|-|S|} f(S)
      for (std::uint32_t t = 0; t < (1u << n); ++t) {
        Rational a = 0;
        for (std::uint32_t s = t;; s = (s - 1) & t) {
          if (std::popcount(t ^ s) % 2) {
            a -= v.values[s];
          } else {
            a += v.values[s];
          }
          if (s == 0) break;
        }
        CHECK(f.coeff(SubsetMask(t)) == a);
      }
    }
  }

  TEST_CASE("K2 cut is submodular but not modular") {
    const BruteForceResult r = brute_force_submodular(k2());
    CHECK(r.submodular);
    CHECK_FALSE(r.modular);
    CHECK(max_second_derivative(k2()) == -2);
  }

  TEST_CASE("x0 x1 is not submodular and the witness is correct") {
    const SetFunction f(2, {{3u, 1}});
    const BruteForceResult r = brute_force_submodular(f);
    REQUIRE_FALSE(r.submodular);
    REQUIRE(r.witness);
    CHECK(r.witness->second_derivative == 1);
    const std::uint32_t base = r.witness->vertex.bits & ~3u;
    CHECK(f.value(SubsetMask(base | 3)) - f.value(SubsetMask(base | 1)) - f.value(SubsetMask(base | 2)) +
              f.value(SubsetMask(base)) ==
          1);
  }

  TEST_CASE("modular functions report both flags") {
    const SetFunction f(3, {{0u, 5}, {1u, -1}, {4u, 3}});
    const BruteForceResult r = brute_force_submodular(f);
    CHECK(r.submodular);
    CHECK(r.modular);
  }

  TEST_CASE("brute force agrees with the lattice definition and the seven conditions agree") {
    Rng rng(17);
    int sub = 0;
    for (int trial = 0; trial < 60; ++trial) {
      const int n = 2 + static_cast<int>(rng.below(4));
      SetFunction f = random_setfunction(n, std::min(n, 3), -3, 3, 100 + trial);
      // Push half of the instances towards submodularity.
      if (trial % 2 == 0) f = f - pairwise(n, max_second_derivative(f));
      const ValueTable v = values_from_mle(f);
      const bool oracle = lattice_submodular(v.values, n);
      sub += oracle;
      CHECK(brute_force_submodular(f).submodular == oracle);
      for (int c = 1; c <= 7; ++c) CHECK(check_condition(f, static_cast<Condition>(c)) == oracle);
    }
    CHECK(sub > 0);
    CHECK(sub < 60);
  }

  TEST_CASE("partial derivative lowers the degree and matches finite differences") {
    const SetFunction f = random_setfunction(5, 4, -2, 2, 9);
    for (int i = 0; i < 5; ++i) {
      const SetFunction p = partial(f, i);
      if (!p.is_zero()) CHECK(p.degree() <= f.degree() - 1);
      for (std::uint32_t s = 0; s < 32; ++s) {
        CHECK(p.value(SubsetMask(s)) == f.value(SubsetMask(s | (1u << i))) - f.value(SubsetMask(s & ~(1u << i))));
      }
    }
    CHECK_THROWS_AS(second_partial(f, 1, 1), std::invalid_argument);
  }

  TEST_CASE("multilinear evaluation satisfies the coordinate interpolation identity") {
    const SetFunction f = random_setfunction(5, 5, -3, 3, 21);
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> x(5);
      for (double& xi : x) xi = rng.uniform(-1, 2);
      const int i = static_cast<int>(rng.below(5));
      std::vector<double> x0 = x, x1 = x;
      x0[i] = 0;
      x1[i] = 1;
      const double lhs = f.evaluate(x);
      const double rhs = x[i] * f.evaluate(x1) + (1 - x[i]) * f.evaluate(x0);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + std::abs(lhs)));
    }
  }

  TEST_CASE("complement, restriction and contraction follow value semantics") {
    const SetFunction f = random_setfunction(5, 3, -4, 4, 5);
    const ValueTable v = values_from_mle(f);
    const ValueTable vc = values_from_mle(complement(f));
    for (std::uint32_t s = 0; s < 32; ++s) CHECK(vc.values[s] == v.values[31 & ~s]);

    const SubsetMask a(0b01101);
    const SetFunction r = restrict_to(f, a);
    const SetFunction c = contract(f, a);
    for (std::uint32_t s = 0; s < 32; ++s) {
      CHECK(r.value(SubsetMask(s)) == v.values[s & a.bits]);
      CHECK(c.value(SubsetMask(s)) == v.values[s | a.bits] - v.values[a.bits]);
    }
  }

  TEST_CASE("truncation keeps terms of size at most k") {
    const SetFunction f = random_setfunction(5, 5, -4, 4, 6);
    const SetFunction t = truncate(f, 2);
    for (const auto& [mask, c] : f.terms()) {
      CHECK(t.coeff(SubsetMask(mask)) == (std::popcount(mask) <= 2 ? c : Rational(0)));
    }
  }

  TEST_CASE("repair removes small positive second derivatives only") {
    const SetFunction f(3, {{3u, Rational(1) / 1000000000}, {5u, -1}, {6u, -1}});
    double shift = 0;
    const SetFunction g = repair_submodularity(f, 1e-6, &shift);
    CHECK(brute_force_submodular(g).submodular);
    CHECK(shift == doctest::Approx(1e-9));
    const SetFunction bad(3, {{3u, 1}});
    CHECK(repair_submodularity(bad, 1e-6, &shift) == bad);
    CHECK(shift == 0.0);
  }

  TEST_CASE("capacity limits are enforced") {
    CHECK_THROWS_AS(check_condition(SetFunction(13), Condition::I), CapacityError);
    CHECK_THROWS_AS(SetFunction(25), CapacityError);
  }
}
