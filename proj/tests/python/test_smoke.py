# Copyright 2026 The sossubmod Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import itertools
from fractions import Fraction

import pytest

import sossubmod as sm


def k2():
    return sm.from_terms(2, {(0,): 1, (1,): 1, (0, 1): -2})


def test_values_match_subset_sums():
    terms = {(0,): Fraction(1, 3), (1, 2): "-2.5", (0, 1, 2): 4}
    f = sm.from_terms(3, terms)
    for r in range(4):
        for s in itertools.combinations(range(3), r):
            expected = sum(Fraction(str(c)) for t, c in terms.items() if set(t) <= set(s))
            assert Fraction(f.value(list(s))) == expected


def test_from_values_round_trip():
    vals = ["0", "3", "-1/2", "7"]
    f = sm.SetFunction.from_values(2, vals)
    assert [Fraction(v) for v in f.values()] == [Fraction(v) for v in vals]
    assert sm.SetFunction.from_json(f.to_json()) == f


def test_k2_is_certified_at_zero():
    rep = sm.certify(k2(), 0)
    assert rep["verdict"] == "CERTIFIED"
    assert len(rep["pairs"]) == 1
    assert sm.minimal_t(k2())["t"] == 0


def test_product_is_not_submodular():
    f = sm.from_terms(2, {(0, 1): 1})
    bf = sm.brute_force_submodular(f)
    assert not bf["submodular"]
    assert sm.minimal_t(f)["status"] == "NOT_SUBMODULAR"


def test_counterexample_needs_t_two():
    f = sm.family({"family": "CounterexampleDeg4", "n": 5})
    assert sm.certify(f, 1, jobs=2)["verdict"] == "NOT_SOS"
    assert sm.certify(f, 2, jobs=2)["verdict"] == "CERTIFIED"


def test_decomposition_and_ssp():
    f = sm.random_setfunction(6, 4, -10, 10, 3)
    dec = sm.decompose(f, "trivial")
    trace = sm.ssp(f, dec, seed=1)
    obj = trace["objective"]
    assert all(b <= a for a, b in zip(obj, obj[1:]))
    assert trace["termination"] == "local minimum"
    assert obj[-1] >= sm.exact_min(f)[1]


def test_ratio_bounds():
    f = sm.family({"family": "Determinantal", "n": 4, "seed": 2, "sigma": "2"})
    star = sm.gamma_star(f)
    assert sm.gamma_trunc(f, 2, 1)["gamma"] <= star + 1e-6


def test_regression_fit_is_submodular():
    csv = sm.synthetic_dataset("log", 5, 80, 0.1, 1)
    model = sm.fit(csv, "tsos", 2)
    assert model["brute_force_submodular"]


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        sm.from_terms(2, {(0,): "abc"})
    with pytest.raises(IndexError):
        sm.from_terms(2, {(5,): 1})
    with pytest.raises(ValueError):
        sm.family({"family": "Nope"})
