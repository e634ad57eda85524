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

"""Exact set functions, t-sos submodularity certificates and applications."""

import json
from fractions import Fraction

from . import _sossubmod
from ._sossubmod import (
    CapacityError,
    NotMonotoneError,
    ParseError,
    SetFunction,
    __version__,
    brute_force_submodular,
    check_characterization,
    exact_min,
    gamma_star,
    gamma_trunc,
    minimal_t,
    random_setfunction,
)

__all__ = [
    "CapacityError",
    "NotMonotoneError",
    "ParseError",
    "SetFunction",
    "__version__",
    "brute_force_submodular",
    "certify",
    "check_characterization",
    "decompose",
    "exact_min",
    "family",
    "fit",
    "from_terms",
    "gamma_star",
    "gamma_trunc",
    "minimal_t",
    "random_setfunction",
    "ssp",
    "synthetic_dataset",
]


def _coeff_text(c):
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    if isinstance(c, float):
        return repr(c)
    return str(c)


def from_terms(n, terms):
    """SetFunction from {subset: coefficient}; coefficients may be int, str, float or Fraction."""
    return SetFunction(n, {tuple(sorted(s)): _coeff_text(c) for s, c in terms.items()})


def certify(f, t, jobs=1, tolerance=None):
    """t-sos submodularity report as a dict (verdict, per-pair margins and Gram certificates)."""
    tol = json.dumps(tolerance) if tolerance else ""
    return json.loads(_sossubmod.certify_json(f, t, jobs, tol))


def family(spec):
    """Build a family member from a spec dict, e.g. {"family": "GraphCut", "adjacency": [[0, 1], [1, 0]]}."""
    return _sossubmod.build_family(json.dumps(spec))


def decompose(f, method="tsos", t=2):
    return json.loads(_sossubmod.decompose_json(f, method, t))


def ssp(f, decomposition, seed, max_iterations=1000):
    return _sossubmod.ssp(f, json.dumps(decomposition), seed, max_iterations)


def synthetic_dataset(kind, n, m, noise, seed):
    """CSV text with header mask,label,split."""
    return _sossubmod.synthetic_csv(kind, n, m, noise, seed)


def fit(csv, method, k, t=0, lam=0.0):
    return json.loads(_sossubmod.fit_json(csv, method, k, t, lam))
