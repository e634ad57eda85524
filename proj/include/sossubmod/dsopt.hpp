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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sossubmod/certify.hpp"
#include "sossubmod/setfn.hpp"

namespace sossubmod {

enum class DecompositionKind { TRIVIAL, TSOS_IRREDUCIBLE };

const char* to_string(DecompositionKind k);

/// f = g - h with g and h submodular.
struct Decomposition {
  SetFunction G;
  SetFunction H;
  DecompositionKind kind = DecompositionKind::TRIVIAL;
  int t = -1;  // TSOS_IRREDUCIBLE only
  std::optional<SubmodCertReport> certificate_g;
  std::optional<SubmodCertReport> certificate_h;
  double repair_shift = 0.0;
  double solve_seconds = 0.0;
};

// G keeps the modular part and the negative higher-order terms, H the negated
// positive higher-order terms.
Decomposition trivial_decomposition(const SetFunction& f);

// Exact sum over vertices of sum_{i<j} d2H/dx_i dx_j.
Rational curvature_objective(const SetFunction& h);

class DecompositionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Maximizes curvature_objective(H) subject to F + H and H being t-sos-submodular.
// Requires t >= 2 ceil(d/2) - 2.
Decomposition tsos_irreducible_decomposition(const SetFunction& f, int t, const ToleranceProfile& tol = {});

using Permutation = std::vector<int>;

bool is_permutation(const Permutation& pi, int n);

// Chain subgradient: a modular function with constant term h(empty) and weight
// h(S_i) - h(S_{i-1}) on the i-th element of pi. Tight on the chain and below
// h everywhere when h is submodular. Throws if pi does not list T first.
SetFunction subgradient(const SetFunction& h, SubsetMask t, const Permutation& pi);
SetFunction subgradient(const ValueTable& h, SubsetMask t, const Permutation& pi);

// Uniform permutation whose first |s| entries are the elements of s.
Permutation random_extension(SubsetMask s, int n, std::uint64_t seed);

bool is_local_minimum(const std::vector<double>& values, int n, SubsetMask s);
bool is_local_minimum(const SetFunction& f, SubsetMask s);

struct MinimumResult {
  SubsetMask set;
  double value = 0.0;
};

// Global minimum by enumeration; ties go to the smallest mask.
MinimumResult exact_min_bruteforce(const SetFunction& f);

struct SspTrace {
  std::uint64_t seed = 0;
  std::vector<SubsetMask> iterates;
  std::vector<double> objective;
  std::vector<Permutation> permutations;
  std::vector<std::uint64_t> permutation_seeds;
  int stalled_steps = 0;  // iterations whose permutation gave no strict decrease
  std::string termination;
};

SspTrace ssp(const SetFunction& f, const Decomposition& dec, std::uint64_t seed, int max_iterations = 1000);

// (f - f_opt) / |f_opt|, or f - f_opt when f_opt == 0.
double relative_gap(double f, double f_opt);

}  // namespace sossubmod
