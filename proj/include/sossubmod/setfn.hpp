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

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sossubmod/rational.hpp"

namespace sossubmod {

inline constexpr int kMaxStorageN = 24;
inline constexpr int kMaxEnumerationN = 20;
inline constexpr int kMaxPairwiseN = 12;

/// Subset of the ground set {0, ..., n-1} as a bitset.
struct SubsetMask {
  std::uint32_t bits = 0;

  constexpr SubsetMask() = default;
  constexpr explicit SubsetMask(std::uint32_t b) : bits(b) {}

  static constexpr SubsetMask full(int n) {
    return SubsetMask(n >= 32 ? ~0u : ((1u << n) - 1u));
  }
  static constexpr SubsetMask singleton(int i) { return SubsetMask(1u << i); }
  static SubsetMask from_indices(std::span<const int> indices);

  constexpr bool contains(int i) const { return (bits >> i) & 1u; }
  constexpr int size() const { return std::popcount(bits); }
  constexpr bool empty() const { return bits == 0; }
  constexpr bool subset_of(SubsetMask o) const { return (bits & ~o.bits) == 0; }
  std::vector<int> indices() const;

  constexpr SubsetMask operator|(SubsetMask o) const { return SubsetMask(bits | o.bits); }
  constexpr SubsetMask operator&(SubsetMask o) const { return SubsetMask(bits & o.bits); }
  constexpr SubsetMask without(SubsetMask o) const { return SubsetMask(bits & ~o.bits); }
  constexpr auto operator<=>(const SubsetMask&) const = default;
};

/// Dense table of set-function values indexed by mask.
struct ValueTable {
  int n = 0;
  std::vector<Rational> values;

  ValueTable() = default;
  ValueTable(int n_, std::vector<Rational> v);
  const Rational& operator[](SubsetMask s) const { return values[s.bits]; }
  std::vector<double> to_double() const;
};

/// A set function stored through its multilinear extension coefficients.
/// Immutable once built; zero coefficients are never stored.
class SetFunction {
 public:
  using Terms = std::map<std::uint32_t, Rational>;

  SetFunction() = default;
  explicit SetFunction(int n);
  SetFunction(int n, Terms terms);

  int n() const { return n_; }
  const Terms& terms() const { return terms_; }
  int degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  Rational coeff(SubsetMask t) const;
  double coeff_d(SubsetMask t) const;

  // Exact value at the vertex 1_S.
  Rational value(SubsetMask s) const;
  double evaluate(std::span<const double> x) const;

  SetFunction operator+(const SetFunction& o) const;
  SetFunction operator-(const SetFunction& o) const;
  SetFunction operator-() const;
  SetFunction scaled(const Rational& c) const;

  bool operator==(const SetFunction& o) const { return n_ == o.n_ && terms_ == o.terms_; }

  // Cached floating-point view of the terms.
  const std::vector<std::pair<std::uint32_t, double>>& terms_d() const { return terms_d_; }

 private:
  int n_ = 0;
  int degree_ = 0;
  Terms terms_;
  std::vector<std::pair<std::uint32_t, double>> terms_d_;
};

SetFunction mle_from_values(const ValueTable& v);
ValueTable values_from_mle(const SetFunction& f);
std::vector<double> values_from_mle_d(const SetFunction& f);

double evaluate(const SetFunction& f, std::span<const double> x);
SetFunction partial(const SetFunction& f, int i);
SetFunction second_partial(const SetFunction& f, int i, int j);

struct SubmodularityWitness {
  int i = -1;
  int j = -1;
  SubsetMask vertex;
  Rational second_derivative;  // value of d2F/dx_i dx_j at the vertex (> 0)
};

struct BruteForceResult {
  bool submodular = true;
  bool modular = true;
  std::optional<SubmodularityWitness> witness;
};

// Checks d2F/dx_i dx_j <= 0 on every vertex for every pair.
BruteForceResult brute_force_submodular(const SetFunction& f);

// Largest value of d2F/dx_i dx_j over all pairs and vertices (<= 0 iff submodular).
Rational max_second_derivative(const SetFunction& f);

enum class Condition { I = 1, II, III, IV, V, VI, VII };

bool check_condition(const SetFunction& f, Condition which);

SetFunction complement(const SetFunction& f);
SetFunction restrict_to(const SetFunction& f, SubsetMask a);
SetFunction contract(const SetFunction& f, SubsetMask a);
SetFunction scale_add(std::span<const std::pair<Rational, SetFunction>> parts);
SetFunction truncate(const SetFunction& f, int k);

// Lowers each a({i,j}) by the largest positive value of d2F/dx_i dx_j, provided
// every such value is at most tol; otherwise returns f unchanged. Used to clean
// up fits that are submodular only up to solver tolerance.
SetFunction repair_submodularity(const SetFunction& f, double tol, double* shift = nullptr);

void check_capacity(int n, int limit, const char* what);

}  // namespace sossubmod
