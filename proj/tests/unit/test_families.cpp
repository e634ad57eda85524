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
#include <set>

#include "doctest.h"
#include "sossubmod/certify.hpp"
#include "sossubmod/families.hpp"
#include "sossubmod/rng.hpp"

using namespace sossubmod;

namespace {

// Oracle: cofactor expansion.
Rational cofactor_det(const RationalMatrix& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  if (n == 1) return a[0][0];
  Rational total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    RationalMatrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Rational> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != c) row.push_back(a[r][k]);
      }
      minor.push_back(row);
    }
    const Rational term = a[0][c] * cofactor_det(minor);
    total += c % 2 ? -term : term;
  }
  return total;
}

}  // namespace

TEST_SUITE("families") {
  TEST_CASE("graph cut counts crossing edge weight") {
    Rng rng(2);
    const int n = 5;
    RationalMatrix w(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) w[i][j] = w[j][i] = static_cast<long>(rng.below(4));
    }
    const SetFunction f = build(family::GraphCut{w});
    for (std::uint32_t s = 0; s < 32; ++s) {
      Rational cut = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if (((s >> i) & 1u) != ((s >> j) & 1u)) cut += w[i][j];
        }
      }
      CHECK(f.value(SubsetMask(s)) == cut);
    }
    CHECK(brute_force_submodular(f).submodular);
  }

  TEST_CASE("hypergraph cut counts cut hyperedges") {
    const family::HypergraphCut h{4, {{0, 1, 2}, {1, 3}, {0, 2, 3}}, {2, 1, 3}};
    const SetFunction f = build(h);
    for (std::uint32_t s = 0; s < 16; ++s) {
      Rational cut = 0;
      for (std::size_t e = 0; e < h.edges.size(); ++e) {
        int inside = 0;
        for (int v : h.edges[e]) inside += (s >> v) & 1u;
        if (inside > 0 && inside < static_cast<int>(h.edges[e].size())) cut += h.weights[e];
      }
      CHECK(f.value(SubsetMask(s)) == cut);
    }
  }

  TEST_CASE("coverage equals the size of the union") {
    const family::Coverage c{6, {{0, 1}, {1, 2, 3}, {3, 4}, {0, 5}, {2}}};
    const SetFunction f = build(c);
    for (std::uint32_t s = 0; s < 32; ++s) {
      std::set<int> u;
      for (int i = 0; i < 5; ++i) {
        if ((s >> i) & 1u) u.insert(c.sets[i].begin(), c.sets[i].end());
      }
      CHECK(f.value(SubsetMask(s)) == static_cast<long>(u.size()));
    }
  }

  TEST_CASE("concave cardinality depends on the size only") {
    const family::ConcaveCardinality c{5, {0, 6, -1}};
    const SetFunction f = build(c);
    for (std::uint32_t s = 0; s < 32; ++s) {
      const long k = std::popcount(s);
      CHECK(f.value(SubsetMask(s)) == Rational(6 * k - k * k));
    }
  }

  TEST_CASE("determinantal coefficients are scaled principal minors") {
    const RationalMatrix sig = random_spd(4, 3);
    CHECK(is_symmetric_positive_definite(sig));
    const Rational sigma = 2;
    const SetFunction f = build(family::Determinantal{sig, sigma});
    for (std::uint32_t s = 0; s < 16; ++s) {
      const RationalMatrix sub = principal_submatrix(sig, SubsetMask(s));
      Rational scale = 1;
      for (int k = 0; k < std::popcount(s); ++k) scale *= sigma * sigma;
      CHECK(f.coeff(SubsetMask(s)) == cofactor_det(sub) / scale);
      CHECK(determinant(sub) == cofactor_det(sub));
    }
  }

  TEST_CASE("witness families have their closed forms") {
    const SetFunction budget = build(family::BudgetAdditive{3});
    const SetFunction conv = build(family::ConvolutionWitness{3});
    const SetFunction mono = build(family::MonotonizationWitness{3});
    for (std::uint32_t s = 0; s < 8; ++s) {
      const long all = s == 7 ? 1 : 0;
      CHECK(budget.value(SubsetMask(s)) == 2L * std::popcount(s) - all);
      CHECK(conv.value(SubsetMask(s)) == 1 - all);
      CHECK(mono.value(SubsetMask(s)) == (s == 0 ? 0 : 1));
    }
    CHECK(build(family::ProductMonomial{3}) == SetFunction(3, {{7u, 1}}));
  }

  TEST_CASE("non-polynomial families match their value definitions") {
    const auto z = random_features(5, 3, 7);
    const SetFunction lg = build(family::SyntheticLog{z});
    const SetFunction fl = build(family::FacilityLocation{z});
    auto cosine = [&](int a, int b) {
      double d = 0, na = 0, nb = 0;
      for (int k = 0; k < 3; ++k) {
        d += z[a][k] * z[b][k];
        na += z[a][k] * z[a][k];
        nb += z[b][k] * z[b][k];
      }
      return d / std::sqrt(na * nb);
    };
    for (std::uint32_t s = 1; s < 32; ++s) {
      double mass = 0, cover = 0;
      for (int i = 0; i < 5; ++i) {
        if ((s >> i) & 1u) {
          for (double v : z[i]) mass += v;
        }
        double best = -2;
        for (int j = 0; j < 5; ++j) {
          if ((s >> j) & 1u) best = std::max(best, cosine(i, j));
        }
        cover += best;
      }
      CHECK(lg.value(SubsetMask(s)).get_d() == doctest::Approx(std::log(mass)).epsilon(1e-12));
      CHECK(fl.value(SubsetMask(s)).get_d() == doctest::Approx(cover).epsilon(1e-12));
    }
    CHECK(lg.value(SubsetMask(0)) == 0);
    CHECK(fl.value(SubsetMask(0)) == 0);
  }

  TEST_CASE("expected minimal t is an upper bound on small instances") {
    const std::vector<FamilySpec> specs = {
        family::GraphCut{{{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}},
        family::HypergraphCut{4, {{0, 1, 2, 3}}, {1}},
        family::Coverage{3, {{0, 1}, {0, 2}, {0}, {1, 2}}},
        family::ConcaveCardinality{4, {0, 4, -1}},
        family::BudgetAdditive{3},
        family::ConvolutionWitness{4},
        family::MonotonizationWitness{4},
    };
    for (const auto& spec : specs) {
      CAPTURE(family_name(spec));
      const auto expected = expected_minimal_t(spec);
      REQUIRE(expected);
      const MinimalTResult r = minimal_t(build(spec));
      REQUIRE(r.status == MinimalTStatus::FOUND);
      CHECK(r.t <= *expected);
    }
    CHECK_FALSE(expected_minimal_t(family::ProductMonomial{3}));
  }

  TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(validate(family::GraphCut{{{0, 1}, {2, 0}}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(family::GraphCut{{{0, -1}, {-1, 0}}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(family::HypergraphCut{3, {{0, 0}}, {1}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(family::Coverage{2, {{0, 5}}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(family::Determinantal{{{1, 2}, {2, 1}}, 1}), std::invalid_argument);
  }

  TEST_CASE("random set functions are reproducible and respect degree and range") {
    const SetFunction a = random_setfunction(6, 3, -2, 2, 42);
    CHECK(a == random_setfunction(6, 3, -2, 2, 42));
    CHECK(a.degree() <= 3);
    for (const auto& [mask, c] : a.terms()) {
      CHECK(c >= -2);
      CHECK(c <= 2);
      CHECK(Rational(c * 1000).get_den() == 1);
    }
  }
}
