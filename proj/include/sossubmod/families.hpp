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
#include <variant>
#include <vector>

#include "sossubmod/rational.hpp"
#include "sossubmod/setfn.hpp"

namespace sossubmod {

using RationalMatrix = std::vector<std::vector<Rational>>;

namespace family {

// Cut of a weighted graph given by a symmetric nonnegative adjacency matrix.
struct GraphCut {
  RationalMatrix adjacency;
};

struct HypergraphCut {
  int n = 0;
  std::vector<std::vector<int>> edges;
  std::vector<Rational> weights;
};

// f(S) = |union of A_i over i in S|, A_i subsets of {0, ..., m-1}.
struct Coverage {
  int m = 0;
  std::vector<std::vector<int>> sets;
};

// f(S) = phi(|S|) with phi(k) = sum_j phi[j] k^j.
struct ConcaveCardinality {
  int n = 0;
  std::vector<Rational> phi;
};

struct CounterexampleDeg4 {
  int n = 4;
};

struct ProductMonomial {
  int n = 1;
};

// sum_i 2 x_i - prod_i x_i.
struct BudgetAdditive {
  int n = 2;
};

// 1 - prod_i x_i.
struct ConvolutionWitness {
  int n = 2;
};

// 1 - prod_i (1 - x_i).
struct MonotonizationWitness {
  int n = 2;
};

// a(S) = det(Sigma_S) / sigma^(2|S|), a(empty) = 1.
struct Determinantal {
  RationalMatrix sigma_matrix;
  Rational sigma = 1;
};

// f(S) = log(sum_{i in S} 1'z_i), with f(empty) = 0.
struct SyntheticLog {
  std::vector<std::vector<double>> z;
};

// f(S) = sum_i max_{s in S} cos(z_i, z_s), with f(empty) = 0.
struct FacilityLocation {
  std::vector<std::vector<double>> z;
};

}  // namespace family

using FamilySpec = std::variant<family::GraphCut, family::HypergraphCut, family::Coverage, family::ConcaveCardinality,
                                family::CounterexampleDeg4, family::ProductMonomial, family::BudgetAdditive,
                                family::ConvolutionWitness, family::MonotonizationWitness, family::Determinantal,
                                family::SyntheticLog, family::FacilityLocation>;

std::string family_name(const FamilySpec& spec);
int family_size(const FamilySpec& spec);

// Throws std::invalid_argument on invalid parameters.
void validate(const FamilySpec& spec);

bool is_polynomial_family(const FamilySpec& spec);

// Exact MLE. Non-polynomial families go through Moebius inversion of the
// value table and are capped at n <= 16.
SetFunction build(const FamilySpec& spec);
ValueTable build_values(const FamilySpec& spec);

// Level at which the family is known to be t-sos-submodular, if any.
std::optional<int> expected_minimal_t(const FamilySpec& spec);

// Exact determinant by rational elimination.
Rational determinant(const RationalMatrix& a);
RationalMatrix principal_submatrix(const RationalMatrix& a, SubsetMask s);
// Exact positive-definiteness test via pivots of symmetric elimination.
bool is_symmetric_positive_definite(const RationalMatrix& a);

// Random SPD matrix Q diag(lambda) Q' with lambda ~ unif[0,1] and Q a random
// orthogonal matrix, converted exactly to rationals.
RationalMatrix random_spd(int n, std::uint64_t seed);

// n feature vectors, each uniform on [0,1]^dim.
std::vector<std::vector<double>> random_features(int n, int dim, std::uint64_t seed);

// Random degree-d MLE on n variables with coefficients uniform on [lo, hi],
// rounded to multiples of 1/1000 so the function is exactly representable.
SetFunction random_setfunction(int n, int d, double lo, double hi, std::uint64_t seed);

}  // namespace sossubmod
