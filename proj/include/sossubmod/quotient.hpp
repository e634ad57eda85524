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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sossubmod/rational.hpp"
#include "sossubmod/setfn.hpp"

namespace sossubmod {

// I2: x_i^2 = x_i.  I1: additionally x_i y_i = x_i (variety x <= y).
// I0: x_i y_i = s_i, x_i s_i = s_i, y_i s_i = s_i (variety s = x o y).
enum class RingKind { I2, I1, I0 };

enum class Tag : std::uint8_t { NONE = 0, X = 1, Y = 2, S = 3 };

inline constexpr int kMaxRingIndices = 32;

/// Quotient ring over the indices in `active` (a subset of 0..n-1).
struct Ring {
  RingKind kind = RingKind::I2;
  int n = 0;
  std::uint32_t active = 0;

  static Ring i2(int m);
  static Ring i1(int n);
  static Ring i0(int n);
  // Same ring with the given indices removed.
  Ring without(SubsetMask excluded) const;

  int active_count() const;
  bool allows(Tag tag) const;
  std::string name() const;
  bool operator==(const Ring&) const = default;
};

/// Normal-form monomial: one 2-bit tag per index.
struct Monomial {
  std::uint64_t code = 0;

  Tag tag(int i) const { return static_cast<Tag>((code >> (2 * i)) & 3u); }
  void set(int i, Tag t) {
    code &= ~(std::uint64_t{3} << (2 * i));
    code |= std::uint64_t(static_cast<std::uint8_t>(t)) << (2 * i);
  }
  int degree() const;
  // Index mask of indices carrying a non-NONE tag.
  std::uint32_t support() const;
  std::string to_string() const;
  auto operator<=>(const Monomial&) const = default;
};

// Graded lexicographic order with s_n > ... > s_1 > y_n > ... > y_1 > x_n > ... > x_1.
bool grlex_less(const Monomial& a, const Monomial& b);

Monomial multiply_monomials(const Monomial& a, const Monomial& b, RingKind kind);

class QuotientPoly {
 public:
  using Terms = std::map<std::uint64_t, Rational>;

  QuotientPoly() = default;
  explicit QuotientPoly(Ring ring) : ring_(ring) {}
  QuotientPoly(Ring ring, const Rational& constant);

  const Ring& ring() const { return ring_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  Rational coeff(const Monomial& m) const;
  Rational max_abs_coeff() const;

  void add_term(const Monomial& m, const Rational& c);
  QuotientPoly operator+(const QuotientPoly& o) const;
  QuotientPoly operator-(const QuotientPoly& o) const;
  QuotientPoly operator*(const QuotientPoly& o) const;
  QuotientPoly scaled(const Rational& c) const;
  bool operator==(const QuotientPoly& o) const { return ring_ == o.ring_ && terms_ == o.terms_; }

  // Value at a point of the ambient space; x, y, s have length n.
  Rational evaluate(std::span<const Rational> x, std::span<const Rational> y,
                    std::span<const Rational> s) const;
  std::string to_string() const;

 private:
  void check_ring(const QuotientPoly& o) const;

  Ring ring_;
  Terms terms_;
};

QuotientPoly multiply_reduce(const Monomial& a, const Monomial& b, const Ring& ring);

/// A variable of a raw (unreduced) polynomial.
struct RawVar {
  Tag kind = Tag::X;  // X, Y or S
  int index = 0;
};

struct RawTerm {
  std::vector<std::pair<RawVar, int>> factors;  // variable and exponent >= 0
  Rational coeff;
};

using RawPoly = std::vector<RawTerm>;

QuotientPoly normal_form(const RawPoly& p, const Ring& ring);

// All normal-form monomials of degree <= t on the active indices, ascending
// in grlex order.
std::vector<Monomial> basis(const Ring& ring, int t);
std::size_t basis_size(const Ring& ring, int t);

/// Per-index affine substitution c0 + cx x_i + cy y_i + cs s_i.
struct Affine {
  Rational c0 = 0;
  Rational cx = 0;
  Rational cy = 0;
  Rational cs = 0;

  static Affine constant(const Rational& c) { return {c, 0, 0, 0}; }
  static Affine x() { return {0, 1, 0, 0}; }
  static Affine y() { return {0, 0, 1, 0}; }
  static Affine s() { return {0, 0, 0, 1}; }
};

// Expands F(sub_1, ..., sub_n) and reduces it in `ring`.
QuotientPoly embed_setfunction(const SetFunction& f, std::span<const Affine> subs, const Ring& ring);

// Convenience: F(x), F(y), F(s) with every index substituted by the same variable.
std::vector<Affine> uniform_substitution(int n, const Affine& a);

}  // namespace sossubmod
