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

#include <filesystem>

#include "doctest.h"
#include "sossubmod/families.hpp"
#include "sossubmod/io.hpp"

using namespace sossubmod;
using io::Json;

TEST_SUITE("io") {
  TEST_CASE("set function round trips through both formats") {
    const SetFunction f = random_setfunction(5, 3, -7, 7, 4) + SetFunction(5, {{3u, Rational(1) / 3}});
    CHECK(io::setfunction_from_json(io::to_json(f)) == f);
    CHECK(io::setfunction_from_json(io::to_json(values_from_mle(f))) == f);
    CHECK(io::valuetable_from_json(io::to_json(values_from_mle(f))).values == values_from_mle(f).values);
  }

  TEST_CASE("coefficients accept numbers and strings") {
    const Json j = Json::parse(R"({"n": 2, "terms": [{"subset": [0], "coeff": 0.5}, {"subset": [0, 1], "coeff": "-3/4"}]})");
    const SetFunction f = io::setfunction_from_json(j);
    CHECK(f.coeff(SubsetMask(1)) == Rational(1) / 2);
    CHECK(f.coeff(SubsetMask(3)) == Rational(-3) / 4);
  }

  TEST_CASE("malformed set functions are rejected") {
    for (const char* text : {
             R"({"terms": []})",
             R"({"n": 2, "terms": [{"subset": [1, 0], "coeff": 1}]})",
             R"({"n": 2, "terms": [{"subset": [2], "coeff": 1}]})",
             R"({"n": 2, "terms": [{"subset": [0], "coeff": 1}, {"subset": [0], "coeff": 2}]})",
             R"({"n": 2, "terms": [{"subset": [0], "coeff": "abc"}]})",
             R"({"n": 2, "values": [1, 2, 3]})",
         }) {
      CAPTURE(text);
      CHECK_THROWS_AS(io::setfunction_from_json(Json::parse(text)), ParseError);
    }
  }

  TEST_CASE("family specs round trip") {
    const std::vector<FamilySpec> specs = {
        family::GraphCut{{{0, 1}, {1, 0}}},
        family::HypergraphCut{3, {{0, 1, 2}}, {2}},
        family::Coverage{3, {{0}, {1, 2}}},
        family::ConcaveCardinality{3, {0, 3, -1}},
        family::CounterexampleDeg4{5},
        family::Determinantal{random_spd(3, 1), 2},
    };
    for (const auto& spec : specs) {
      CAPTURE(family_name(spec));
      CHECK(build(io::familyspec_from_json(io::to_json(spec))) == build(spec));
    }
    const FamilySpec seeded = io::familyspec_from_json(Json::parse(R"({"family": "Determinantal", "n": 3, "seed": 1})"));
    CHECK(build(seeded) == build(family::Determinantal{random_spd(3, 1), 2}));
    CHECK_THROWS_AS(io::familyspec_from_json(Json::parse(R"({"family": "Nope"})")), ParseError);
    CHECK_THROWS_AS(io::familyspec_from_json(Json::parse(R"({"family": "SyntheticLog", "n": 3})")), ParseError);
    CHECK_THROWS_AS(io::familyspec_from_json(Json::parse(R"({"family": "GraphCut", "adjacency": [[0, 1], [2, 0]]})")),
                    ParseError);
  }

  TEST_CASE("tolerance profiles") {
    ToleranceProfile t;
    t.max_iterations = 77;
    const ToleranceProfile back = io::tolerance_from_json(io::to_json(t));
    CHECK(back.max_iterations == 77);
    CHECK(back.feas_scale == t.feas_scale);
    CHECK_THROWS_AS(io::tolerance_from_json(Json::parse(R"({"bogus": 1})")), ParseError);
    CHECK_THROWS_AS(io::tolerance_from_json(Json::parse(R"({"max_iterations": 0})")), ParseError);
  }

  TEST_CASE("dataset csv round trip") {
    const Dataset d = make_synthetic(SyntheticKind::LOG, 5, 40, 0.1, 2);
    const Dataset back = io::dataset_from_csv(io::dataset_to_csv(d));
    REQUIRE(back.rows.size() == d.rows.size());
    CHECK(back.n == 5);
    for (std::size_t k = 0; k < d.rows.size(); ++k) {
      CHECK(back.rows[k].mask == d.rows[k].mask);
      CHECK(back.rows[k].label == d.rows[k].label);
      CHECK(back.rows[k].split == d.rows[k].split);
    }
    CHECK(io::mask_string(SubsetMask(0b101), 4) == "1010");
    CHECK(io::parse_mask_string("0110") == SubsetMask(0b0110));
    CHECK_THROWS_AS(io::dataset_from_csv("mask,label,split\n01,x,train\n"), ParseError);
    CHECK_THROWS_AS(io::dataset_from_csv("mask,label,split\n01,1,nowhere\n"), ParseError);
  }

  TEST_CASE("decomposition and report serialization") {
    const SetFunction f = random_setfunction(4, 3, -3, 3, 5);
    const Decomposition d = trivial_decomposition(f);
    const Decomposition back = io::decomposition_from_json(io::to_json(d));
    CHECK(back.G == d.G);
    CHECK(back.H == d.H);
    const Json r = io::to_json(is_t_sos_submodular(SetFunction(2, {{1u, 1}, {2u, 1}, {3u, -2}}), 0));
    CHECK(r["verdict"] == "CERTIFIED");
    CHECK(r["pairs"].size() == 1);
    CHECK(r["pairs"][0].contains("Q"));
  }

  TEST_CASE("doubles print shortest round-trip text") {
    CHECK(io::format_double(0.1) == "0.1");
    CHECK(io::format_double(1e300) == "1e+300");
    CHECK(std::stod(io::format_double(1.0 / 3)) == 1.0 / 3);
  }

  TEST_CASE("write_file refuses to overwrite without force") {
    const auto dir = std::filesystem::temp_directory_path() / "sossubmod_io_test";
    std::filesystem::remove_all(dir);
    const auto path = dir / "sub" / "a.txt";
    io::write_file(path, "one", false);
    CHECK(io::read_file(path) == "one");
    CHECK_THROWS(io::write_file(path, "two", false));
    io::write_file(path, "two", true);
    CHECK(io::read_file(path) == "two");
    std::filesystem::remove_all(dir);
  }
}
