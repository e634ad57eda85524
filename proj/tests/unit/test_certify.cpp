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

#include "doctest.h"
#include "sossubmod/certify.hpp"
#include "sossubmod/families.hpp"

using namespace sossubmod;

namespace {

SetFunction k2() { return SetFunction(2, {{1u, 1}, {2u, 1}, {3u, -2}}); }

// Oracle: recompute z' Q z in the quotient ring and compare coefficient-wise.
double independent_residual(const QuotientPoly& target, const GramCertificate& c) {
  QuotientPoly sum(c.ring);
  const auto n = c.basis.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      sum = sum + multiply_reduce(c.basis[a], c.basis[b], c.ring).scaled(rational_from_double(c.Q(a, b)));
    }
  }
  const QuotientPoly diff = sum - target;
  return diff.max_abs_coeff().get_d();
}

QuotientPoly i2_poly(int n, std::initializer_list<std::pair<std::uint32_t, int>> terms) {
  const Ring ring = Ring::i2(n);
  QuotientPoly p(ring);
  for (const auto& [mask, c] : terms) {
    Monomial m;
    for (int i = 0; i < n; ++i) {
      if ((mask >> i) & 1u) m.set(i, Tag::X);
    }
    p.add_term(m, c);
  }
  return p;
}

}  // namespace

TEST_SUITE("certify") {
  TEST_CASE("t range") {
    CHECK(t_range(4, 5).t_min == 1);
    CHECK(t_range(4, 5).t_max == 2);
    CHECK(t_range(2, 3).t_min == 0);
    CHECK(t_range(2, 3).t_max == 0);
    CHECK(t_range(6, 10).t_max == 6);
  }

  TEST_CASE("pair target is minus the second derivative on the cube") {
    const SetFunction f = random_setfunction(5, 4, -3, 3, 2);
    for (int i = 0; i < 5; ++i) {
      for (int j = i + 1; j < 5; ++j) {
        const QuotientPoly q = pair_target(f, i, j);
        for (std::uint32_t s = 0; s < 32; ++s) {
          if (s & ((1u << i) | (1u << j))) continue;
          std::vector<Rational> x(5), zero(5);
          for (int k = 0; k < 5; ++k) x[k] = (s >> k) & 1u;
          const Rational d2 = f.value(SubsetMask(s | (1u << i) | (1u << j))) - f.value(SubsetMask(s | (1u << i))) -
                              f.value(SubsetMask(s | (1u << j))) + f.value(SubsetMask(s));
          CHECK(q.evaluate(x, zero, zero) == -d2);
        }
      }
    }
  }

  TEST_CASE("single polynomial margins") {
    // (x0 - x1)^2 = x0 + x1 - 2 x0 x1 mod I2
    const SosResult sq = sos_feasibility_margin(i2_poly(2, {{1u, 1}, {2u, 1}, {3u, -2}}), 1);
    CHECK(sq.verdict == SosVerdict::SOS);
    REQUIRE(sq.certificate);
    CHECK(independent_residual(i2_poly(2, {{1u, 1}, {2u, 1}, {3u, -2}}), *sq.certificate) <= 1e-6);
    // -x0 takes the value -1 on the cube.
    const SosResult neg = sos_feasibility_margin(i2_poly(1, {{1u, -1}}), 1);
    CHECK(neg.verdict == SosVerdict::NOT_SOS);
    CHECK(neg.lower_bound >= 1e-5);
    // x0 x1 is 2-sos (it is its own square) but not 1-sos.
    CHECK(sos_feasibility_margin(i2_poly(2, {{3u, 1}}), 2).verdict == SosVerdict::SOS);
    CHECK(sos_feasibility_margin(i2_poly(2, {{3u, 1}}), 1).verdict == SosVerdict::NOT_SOS);
  }

  TEST_CASE("K2 cut is certified at t = 0 with a checkable certificate") {
    const SubmodCertReport r = is_t_sos_submodular(k2(), 0);
    CHECK(r.verdict == CertVerdict::CERTIFIED);
    REQUIRE(r.pairs.size() == 1);
    REQUIRE(r.pairs[0].sos.certificate);
    const GramCertificate& c = *r.pairs[0].sos.certificate;
    CHECK(c.min_eigenvalue >= -1e-9);
    CHECK(independent_residual(pair_target(k2(), 0, 1), c) <= 1e-6 * 3);
  }

  TEST_CASE("fewer than two elements is vacuously certified") {
    CHECK(is_t_sos_submodular(SetFunction(1, {{1u, 3}}), 0).verdict == CertVerdict::CERTIFIED);
    CHECK(is_t_sos_submodular(SetFunction(0), 0).pairs.empty());
  }

  TEST_CASE("minimal t on simple inputs") {
    const MinimalTResult bad = minimal_t(SetFunction(2, {{3u, 1}}));
    CHECK(bad.status == MinimalTStatus::NOT_SUBMODULAR);
    REQUIRE(bad.witness);
    CHECK(bad.witness->second_derivative == 1);

    const MinimalTResult mod = minimal_t(SetFunction(3, {{1u, 2}, {4u, -1}}));
    CHECK(mod.status == MinimalTStatus::FOUND);
    CHECK(mod.t == 0);
    CHECK(mod.modular);

    const MinimalTResult cut = minimal_t(k2());
    CHECK(cut.status == MinimalTStatus::FOUND);
    CHECK(cut.t == 0);
    CHECK_FALSE(cut.modular);
  }

  TEST_CASE("certified implies submodular by enumeration, and certificates re-verify") {
    int certified = 0;
    for (int seed = 0; seed < 8; ++seed) {
      const SetFunction f = random_setfunction(4, 3, -2, 2, 500 + seed);
      const SetFunction g = f - SetFunction(4, {{3u, 3}, {5u, 3}, {6u, 3}, {9u, 3}, {10u, 3}, {12u, 3}});
      for (const SetFunction& h : {f, g}) {
        const SubmodCertReport r = is_t_sos_submodular(h, 1);
        if (r.verdict != CertVerdict::CERTIFIED) continue;
        ++certified;
        CHECK(brute_force_submodular(h).submodular);
        for (const auto& p : r.pairs) {
          REQUIRE(p.sos.certificate);
          const QuotientPoly target = pair_target(h, p.i, p.j);
          CHECK(independent_residual(target, *p.sos.certificate) <= 1e-6 * (1 + target.max_abs_coeff().get_d()));
        }
      }
    }
    CHECK(certified > 0);
  }

  TEST_CASE("parallel and serial certification agree") {
    const SetFunction f = build(family::CounterexampleDeg4{5});
    const SubmodCertReport a = is_t_sos_submodular(f, 1, {}, 1);
    const SubmodCertReport b = is_t_sos_submodular(f, 1, {}, 4);
    REQUIRE(a.pairs.size() == b.pairs.size());
    CHECK(a.verdict == b.verdict);
    for (std::size_t k = 0; k < a.pairs.size(); ++k) {
      CHECK(a.pairs[k].i == b.pairs[k].i);
      CHECK(a.pairs[k].sos.verdict == b.pairs[k].sos.verdict);
      CHECK(a.pairs[k].sos.margin == b.pairs[k].sos.margin);
    }
  }

  TEST_CASE("every characterization certifies K2 and rejects x0 x1") {
    const SetFunction bad(2, {{3u, 1}});
    for (Characterization c : {Characterization::G, Characterization::DDIFF, Characterization::G1,
                               Characterization::H1, Characterization::H2, Characterization::G2}) {
      CAPTURE(to_string(c));
      CHECK(check_characterization(k2(), c, 0).verdict == CertVerdict::CERTIFIED);
      CHECK(check_characterization(bad, c, 0).verdict == CertVerdict::NOT_SOS);
      CHECK(characterization_from_string(to_string(c)) == c);
    }
    CHECK_THROWS_AS(characterization_from_string("nope"), std::invalid_argument);
  }
}
