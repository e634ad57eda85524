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
#include "sossubmod/families.hpp"
#include "sossubmod/regression.hpp"
#include "sossubmod/rng.hpp"

using namespace sossubmod;

namespace {

// Every subset once in train, then again in val and test.
Dataset full_dataset(const SetFunction& f) {
  Dataset d;
  d.n = f.n();
  for (Split sp : {Split::TRAIN, Split::VAL, Split::TEST}) {
    for (std::uint32_t s = 0; s < (1u << f.n()); ++s) d.rows.push_back({SubsetMask(s), f.value(SubsetMask(s)).get_d(), sp});
  }
  return d;
}

double direct_rmse(const SetFunction& f, const Dataset& d, Split sp) {
  double sum = 0;
  int count = 0;
  for (const auto& r : d.rows) {
    if (r.split != sp) continue;
    const double e = f.value(r.mask).get_d() - r.label;
    sum += e * e;
    ++count;
  }
  return count ? std::sqrt(sum / count) : 0.0;
}

}  // namespace

TEST_SUITE("regression") {
  TEST_CASE("poly fit recovers a noiseless polynomial") {
    const SetFunction f = random_setfunction(5, 2, -3, 3, 8);
    const RegressionModel m = fit(full_dataset(f), {RegressionMethod::POLY, 2, 0, 0.0, {}});
    for (std::uint32_t s = 0; s < 32; ++s) {
      if (std::popcount(s) > 2) continue;
      CHECK(m.F.coeff_d(SubsetMask(s)) == doctest::Approx(f.coeff_d(SubsetMask(s))).epsilon(1e-8));
    }
    CHECK(m.rmse_train <= 1e-8);
    CHECK(m.rmse_test <= 1e-8);
  }

  TEST_CASE("reported rmse matches a direct computation") {
    const Dataset d = make_synthetic(SyntheticKind::LOG, 6, 200, 0.1, 3);
    const RegressionModel m = fit(d, {RegressionMethod::POLY, 2, 0, 1e-3, {}});
    CHECK(m.rmse_train == doctest::Approx(direct_rmse(m.F, d, Split::TRAIN)).epsilon(1e-9));
    CHECK(m.rmse_val == doctest::Approx(direct_rmse(m.F, d, Split::VAL)).epsilon(1e-9));
    CHECK(m.rmse_test == doctest::Approx(direct_rmse(m.F, d, Split::TEST)).epsilon(1e-9));
    CHECK(rmse(m.F, d, Split::TEST) == doctest::Approx(m.rmse_test).epsilon(1e-12));
  }

  TEST_CASE("row order does not change the fit") {
    Dataset d = make_synthetic(SyntheticKind::FACLOC, 5, 120, 0.1, 4);
    const RegressionModel a = fit(d, {RegressionMethod::TSOS, 2, 0, 0.0, {}});
    Rng rng(1);
    rng.shuffle(d.rows, 0, d.rows.size());
    const RegressionModel b = fit(d, {RegressionMethod::TSOS, 2, 0, 0.0, {}});
    for (std::uint32_t s = 0; s < 32; ++s) {
      CHECK(a.F.coeff_d(SubsetMask(s)) == doctest::Approx(b.F.coeff_d(SubsetMask(s))).epsilon(1e-5).scale(1));
    }
  }

  TEST_CASE("constrained fits are submodular and no better on train than poly") {
    for (std::uint64_t seed : {5u, 6u}) {
      const Dataset d = make_synthetic(SyntheticKind::LOGDET, 6, 150, 0.2, seed);
      const RegressionModel poly = fit(d, {RegressionMethod::POLY, 3, 0, 0.0, {}});
      for (RegressionMethod method : {RegressionMethod::TSOS, RegressionMethod::NECESSARY}) {
        const RegressionModel m = fit(d, {method, 3, 2, 0.0, {}});
        CHECK(brute_force_submodular(m.F).submodular);
        CHECK(m.brute_force_submodular);
        CHECK(m.train_objective >= poly.train_objective * (1 - 1e-6));
        if (method == RegressionMethod::TSOS) {
          REQUIRE(m.certificate);
          CHECK(m.certificate->verdict == CertVerdict::CERTIFIED);
        }
      }
    }
  }

  TEST_CASE("tsos recovers a submodular ground truth") {
    const SetFunction cut = build(family::GraphCut{{{0, 1, 0, 2}, {1, 0, 3, 0}, {0, 3, 0, 1}, {2, 0, 1, 0}}});
    const RegressionModel m = fit(full_dataset(cut), {RegressionMethod::TSOS, 2, 0, 0.0, {}});
    // Zero-residual optimum: interior-point accuracy is about the square root of the gap.
    CHECK(m.rmse_test <= 1e-3);
  }

  TEST_CASE("synthetic data is reproducible and split 50/25/25") {
    const Dataset a = make_synthetic(SyntheticKind::LOG, 6, 200, 0.1, 9);
    const Dataset b = make_synthetic(SyntheticKind::LOG, 6, 200, 0.1, 9);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t k = 0; k < a.rows.size(); ++k) {
      CHECK(a.rows[k].mask == b.rows[k].mask);
      CHECK(a.rows[k].label == b.rows[k].label);
    }
    CHECK(a.count(Split::TRAIN) == 100);
    CHECK(a.count(Split::VAL) == 50);
    CHECK(a.count(Split::TEST) == 50);
    // Only training labels carry noise.
    const ValueTable truth = synthetic_truth(SyntheticKind::LOG, 6, 9);
    for (const auto& r : a.rows) {
      if (r.split != Split::TRAIN) CHECK(r.label == doctest::Approx(truth[r.mask].get_d()).epsilon(1e-12));
    }
  }

  TEST_CASE("grid search picks the smallest validation error") {
    const Dataset d = make_synthetic(SyntheticKind::LOG, 5, 120, 0.2, 2);
    const GridResult g = grid_search(d, RegressionMethod::POLY, {1, 2}, {0}, {0.0, 1e-2}, {}, 2);
    REQUIRE(g.cells.size() == 4);
    REQUIRE(g.best);
    for (const auto& c : g.cells) {
      REQUIRE(c.model);
      CHECK(g.cells[*g.best].model->rmse_val <= c.model->rmse_val);
    }
  }

  TEST_CASE("bad arguments are rejected") {
    const Dataset d = make_synthetic(SyntheticKind::LOG, 4, 40, 0.1, 1);
    CHECK_THROWS_AS(fit(d, {RegressionMethod::POLY, 5, 0, 0.0, {}}), std::invalid_argument);
    CHECK_THROWS_AS(fit(d, {RegressionMethod::POLY, 2, 0, -1.0, {}}), std::invalid_argument);
    CHECK_THROWS_AS(fit(d, {RegressionMethod::TSOS, 4, 0, 0.0, {}}), std::invalid_argument);
    CHECK_THROWS_AS(method_from_string("lasso"), std::invalid_argument);
    Dataset bad = d;
    bad.rows.push_back({SubsetMask(1u << 6), 0.0, Split::TRAIN});
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  }
}
