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

#include "doctest.h"
#include "sossubmod/dsopt.hpp"
#include "sossubmod/families.hpp"

using namespace sossubmod;

namespace {

// Oracle: sum over vertices and pairs of the finite second difference.
Rational direct_curvature(const SetFunction& h) {
  const int n = h.n();
  Rational total = 0;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const std::uint32_t b = s & ~((1u << i) | (1u << j));
        total += h.value(SubsetMask(b | (1u << i) | (1u << j))) - h.value(SubsetMask(b | (1u << i))) -
                 h.value(SubsetMask(b | (1u << j))) + h.value(SubsetMask(b));
      }
    }
  }
  return total;
}

bool ssp_trace_valid(const SetFunction& f, const SspTrace& tr) {
  for (std::size_t k = 1; k < tr.objective.size(); ++k) {
    if (tr.objective[k] > tr.objective[k - 1]) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("dsopt") {
  TEST_CASE("trivial decomposition is exact with submodular parts") {
    for (int seed = 0; seed < 10; ++seed) {
      const SetFunction f = random_setfunction(6, 4, -10, 10, 70 + seed);
      const Decomposition d = trivial_decomposition(f);
      CHECK(d.G - d.H == f);
      CHECK(brute_force_submodular(d.G).submodular);
      CHECK(brute_force_submodular(d.H).submodular);
      CHECK(d.kind == DecompositionKind::TRIVIAL);
    }
  }

  TEST_CASE("curvature objective matches the vertex sum") {
    for (int seed = 0; seed < 5; ++seed) {
      const SetFunction h = random_setfunction(5, 4, -3, 3, 90 + seed);
      CHECK(curvature_objective(h) == direct_curvature(h));
    }
  }

  TEST_CASE("chain subgradient is tight on the chain and a minorant") {
    const SetFunction h = trivial_decomposition(random_setfunction(5, 3, -4, 4, 3)).H;
    REQUIRE(brute_force_submodular(h).submodular);
    const SubsetMask t(0b01010);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Permutation pi = random_extension(t, 5, seed);
      REQUIRE(is_permutation(pi, 5));
      CHECK(SubsetMask::from_indices(std::span<const int>(pi.data(), 2)) == t);
      const SetFunction m = subgradient(h, t, pi);
      CHECK(m.degree() <= 1);
      std::uint32_t chain = 0;
      CHECK(m.value(SubsetMask(0)) == h.value(SubsetMask(0)));
      for (int k = 0; k < 5; ++k) {
        chain |= 1u << pi[k];
        CHECK(m.value(SubsetMask(chain)) == h.value(SubsetMask(chain)));
      }
      for (std::uint32_t s = 0; s < 32; ++s) CHECK(m.value(SubsetMask(s)) <= h.value(SubsetMask(s)));
      CHECK(subgradient(values_from_mle(h), t, pi) == m);
    }
    CHECK_THROWS_AS(subgradient(h, t, Permutation{0, 1, 2, 3, 4}), std::invalid_argument);
  }

  TEST_CASE("ssp is deterministic, monotone and stops at a local minimum") {
    const SetFunction f = random_setfunction(7, 4, -10, 10, 12);
    const Decomposition d = trivial_decomposition(f);
    const SspTrace a = ssp(f, d, 5);
    const SspTrace b = ssp(f, d, 5);
    CHECK(a.iterates == b.iterates);
    CHECK(a.permutation_seeds == b.permutation_seeds);
    CHECK(ssp_trace_valid(f, a));
    CHECK(a.termination == "local minimum");
    CHECK(is_local_minimum(f, a.iterates.back()));
    CHECK(a.objective.back() >= exact_min_bruteforce(f).value);
    CHECK(a.iterates.front() == SubsetMask(0));
  }

  TEST_CASE("shared modular shifts do not change the ssp path") {
    // Adding the same modular p to g and h leaves f and every subgradient step unchanged.
    const SetFunction f = random_setfunction(6, 4, -5, 5, 33);
    const Decomposition d = trivial_decomposition(f);
    Decomposition shifted = d;
    const SetFunction p(6, {{1u, 3}, {4u, -2}, {32u, 1}});
    shifted.G = d.G + p;
    shifted.H = d.H + p;
    const SspTrace a = ssp(f, d, 2);
    const SspTrace b = ssp(f, shifted, 2);
    CHECK(a.iterates == b.iterates);
  }

  TEST_CASE("exact minimum by enumeration prefers the smallest mask") {
    const SetFunction f(3, {{1u, -1}, {2u, -1}, {3u, 1}});
    // f = -1 on {0} and {1}, -1 on {0,1}; minimum -1 first reached at mask 1.
    const MinimumResult r = exact_min_bruteforce(f);
    CHECK(r.set == SubsetMask(1));
    CHECK(r.value == -1.0);
  }

  TEST_CASE("local minimum test") {
    const SetFunction f(2, {{1u, -1}, {2u, 1}});
    CHECK(is_local_minimum(f, SubsetMask(1)));
    CHECK_FALSE(is_local_minimum(f, SubsetMask(0)));
    CHECK_FALSE(is_local_minimum(f, SubsetMask(3)));
  }

  TEST_CASE("tsos decomposition is exact, certified and at least as curved as trivial") {
    const SetFunction f = random_setfunction(6, 4, -10, 10, 1001);
    const Decomposition d = tsos_irreducible_decomposition(f, 2);
    CHECK(d.G - d.H == f);
    CHECK(brute_force_submodular(d.G).submodular);
    CHECK(brute_force_submodular(d.H).submodular);
    REQUIRE(d.certificate_g);
    REQUIRE(d.certificate_h);
    CHECK(d.certificate_g->verdict == CertVerdict::CERTIFIED);
    CHECK(d.certificate_h->verdict == CertVerdict::CERTIFIED);
    const double tsos = curvature_objective(d.H).get_d();
    const double triv = curvature_objective(trivial_decomposition(f).H).get_d();
    CHECK(tsos >= triv - 1e-6 * (1 + std::abs(triv)));
    CHECK_THROWS_AS(tsos_irreducible_decomposition(f, 1), std::invalid_argument);
  }

  TEST_CASE("relative gap") {
    CHECK(relative_gap(-8, -10) == doctest::Approx(0.2));
    CHECK(relative_gap(3, 0) == 3);
  }
}
