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

#include "sossubmod/quotient.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <tuple>

namespace sossubmod {

namespace {

constexpr std::uint64_t kLowBits = 0x5555555555555555ull;

std::uint32_t tag_bits(const Monomial& m, Tag t) {
  std::uint32_t out = 0;
  for (std::uint64_t c = m.code; c;) {
    const int field = std::countr_zero(c) / 2;
    if (m.tag(field) == t) out |= 1u << field;
    c &= ~(std::uint64_t{3} << (2 * field));
  }
  return out;
}

void check_ring_size(int n) {
  if (n < 0 || n > kMaxRingIndices) throw CapacityError("quotient ring supports at most 32 indices");
}

}  // namespace

Ring Ring::i2(int m) {
  check_ring_size(m);
  return Ring{RingKind::I2, m, SubsetMask::full(m).bits};
}

Ring Ring::i1(int n) {
  check_ring_size(n);
  return Ring{RingKind::I1, n, SubsetMask::full(n).bits};
}

Ring Ring::i0(int n) {
  check_ring_size(n);
  return Ring{RingKind::I0, n, SubsetMask::full(n).bits};
}

Ring Ring::without(SubsetMask excluded) const {
  Ring r = *this;
  r.active &= ~excluded.bits;
  return r;
}

int Ring::active_count() const { return std::popcount(active); }

bool Ring::allows(Tag tag) const {
  switch (tag) {
    case Tag::NONE:
    case Tag::X:
      return true;
    case Tag::Y:
      return kind != RingKind::I2;
    case Tag::S:
      return kind == RingKind::I0;
  }
  return false;
}

std::string Ring::name() const {
  std::string out = kind == RingKind::I2 ? "I2" : kind == RingKind::I1 ? "I1" : "I0";
  out += "(n=" + std::to_string(n);
  const std::uint32_t missing = SubsetMask::full(n).bits & ~active;
  if (missing) {
    out += ",excluded=[";
    bool first = true;
    for (int i : SubsetMask(missing).indices()) {
      if (!first) out += ",";
      out += std::to_string(i);
      first = false;
    }
    out += "]";
  }
  return out + ")";
}

int Monomial::degree() const { return std::popcount((code | (code >> 1)) & kLowBits); }

std::uint32_t Monomial::support() const {
  std::uint64_t occupied = (code | (code >> 1)) & kLowBits;
  std::uint32_t out = 0;
  for (; occupied; occupied &= occupied - 1) out |= 1u << (std::countr_zero(occupied) / 2);
  return out;
}

std::string Monomial::to_string() const {
  if (code == 0) return "1";
  std::string out;
  for (int i : SubsetMask(support()).indices()) {
    if (!out.empty()) out += "*";
    const Tag t = tag(i);
    out += t == Tag::X ? 'x' : t == Tag::Y ? 'y' : 's';
    out += std::to_string(i);
  }
  return out;
}

bool grlex_less(const Monomial& a, const Monomial& b) {
  const int da = a.degree();
  const int db = b.degree();
  if (da != db) return da < db;
  return std::make_tuple(tag_bits(a, Tag::S), tag_bits(a, Tag::Y), tag_bits(a, Tag::X)) <
         std::make_tuple(tag_bits(b, Tag::S), tag_bits(b, Tag::Y), tag_bits(b, Tag::X));
}

Monomial multiply_monomials(const Monomial& a, const Monomial& b, RingKind kind) {
  std::uint64_t c = a.code | b.code;
  if (kind == RingKind::I1) {
    // x_i y_i -> x_i: fields where both bits are set keep only the low bit
    const std::uint64_t both = (c >> 1) & c & kLowBits;
    c &= ~(both << 1);
  }
  return Monomial{c};
}

QuotientPoly::QuotientPoly(Ring ring, const Rational& constant) : ring_(ring) {
  if (constant != 0) terms_.emplace(0, constant);
}

int QuotientPoly::degree() const {
  int d = 0;
  for (const auto& [code, c] : terms_) d = std::max(d, Monomial{code}.degree());
  return d;
}

Rational QuotientPoly::coeff(const Monomial& m) const {
  auto it = terms_.find(m.code);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational QuotientPoly::max_abs_coeff() const {
  Rational best = 0;
  for (const auto& [code, c] : terms_) {
    Rational a = abs(c);
    if (a > best) best = a;
  }
  return best;
}

void QuotientPoly::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m.code, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void QuotientPoly::check_ring(const QuotientPoly& o) const {
  if (!(ring_ == o.ring_)) throw std::invalid_argument("polynomials belong to different rings");
}

QuotientPoly QuotientPoly::operator+(const QuotientPoly& o) const {
  check_ring(o);
  QuotientPoly out = *this;
  for (const auto& [code, c] : o.terms_) out.add_term(Monomial{code}, c);
  return out;
}

QuotientPoly QuotientPoly::operator-(const QuotientPoly& o) const { return *this + o.scaled(-1); }

QuotientPoly QuotientPoly::operator*(const QuotientPoly& o) const {
  check_ring(o);
  QuotientPoly out(ring_);
  for (const auto& [ca, a] : terms_) {
    for (const auto& [cb, b] : o.terms_) {
      out.add_term(multiply_monomials(Monomial{ca}, Monomial{cb}, ring_.kind), a * b);
    }
  }
  return out;
}

QuotientPoly QuotientPoly::scaled(const Rational& c) const {
  QuotientPoly out(ring_);
  if (c == 0) return out;
  for (const auto& [code, a] : terms_) out.terms_.emplace(code, a * c);
  return out;
}

Rational QuotientPoly::evaluate(std::span<const Rational> x, std::span<const Rational> y,
                                std::span<const Rational> s) const {
  Rational total = 0;
  for (const auto& [code, c] : terms_) {
    Monomial m{code};
    Rational p = c;
    for (int i : SubsetMask(m.support()).indices()) {
      switch (m.tag(i)) {
        case Tag::X:
          p *= x[i];
          break;
        case Tag::Y:
          p *= y[i];
          break;
        case Tag::S:
          p *= s[i];
          break;
        case Tag::NONE:
          break;
      }
    }
    total += p;
  }
  return total;
}

std::string QuotientPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<Monomial> order;
  for (const auto& [code, c] : terms_) order.push_back(Monomial{code});
  std::sort(order.begin(), order.end(), grlex_less);
  std::string out;
  for (const auto& m : order) {
    const Rational& c = terms_.at(m.code);
    if (!out.empty()) out += c < 0 ? " - " : " + ";
    else if (c < 0) out += "-";
    out += format_rational(abs(c));
    if (m.code != 0) out += "*" + m.to_string();
  }
  return out;
}

QuotientPoly multiply_reduce(const Monomial& a, const Monomial& b, const Ring& ring) {
  QuotientPoly out(ring);
  out.add_term(multiply_monomials(a, b, ring.kind), 1);
  return out;
}

QuotientPoly normal_form(const RawPoly& p, const Ring& ring) {
  QuotientPoly out(ring);
  for (const auto& term : p) {
    Monomial m;
    for (const auto& [var, exponent] : term.factors) {
      if (exponent < 0) throw std::invalid_argument("negative exponent");
      if (exponent == 0) continue;
      if (var.index < 0 || var.index >= ring.n || !((ring.active >> var.index) & 1u) ||
          var.kind == Tag::NONE || !ring.allows(var.kind)) {
        throw std::invalid_argument("variable does not belong to ring " + ring.name());
      }
      Monomial single;
      single.set(var.index, var.kind);
      m = multiply_monomials(m, single, ring.kind);
    }
    out.add_term(m, term.coeff);
  }
  return out;
}

std::vector<Monomial> basis(const Ring& ring, int t) {
  if (t < 0) throw std::invalid_argument("basis degree must be nonnegative");
  std::vector<Tag> tags{Tag::X};
  if (ring.allows(Tag::Y)) tags.push_back(Tag::Y);
  if (ring.allows(Tag::S)) tags.push_back(Tag::S);
  const std::vector<int> idx = SubsetMask(ring.active).indices();
  std::vector<Monomial> out;
  // Depth-first over supports in increasing index order.
  std::vector<std::pair<std::size_t, Monomial>> stack{{0, Monomial{}}};
  while (!stack.empty()) {
    auto [start, m] = stack.back();
    stack.pop_back();
    out.push_back(m);
    if (m.degree() == t) continue;
    for (std::size_t k = start; k < idx.size(); ++k) {
      for (Tag tg : tags) {
        Monomial next = m;
        next.set(idx[k], tg);
        stack.emplace_back(k + 1, next);
      }
    }
  }
  std::sort(out.begin(), out.end(), grlex_less);
  return out;
}

std::size_t basis_size(const Ring& ring, int t) {
  const int m = ring.active_count();
  const std::size_t per = ring.kind == RingKind::I2 ? 1 : ring.kind == RingKind::I1 ? 2 : 3;
  std::size_t total = 0;
  std::size_t binom = 1;
  std::size_t power = 1;
  for (int k = 0; k <= std::min(t, m); ++k) {
    total += binom * power;
    binom = binom * static_cast<std::size_t>(m - k) / static_cast<std::size_t>(k + 1);
    power *= per;
  }
  return total;
}

QuotientPoly embed_setfunction(const SetFunction& f, std::span<const Affine> subs, const Ring& ring) {
  if (static_cast<int>(subs.size()) != f.n()) {
    throw std::invalid_argument("substitution length does not match n");
  }
  if (f.n() > ring.n) throw std::invalid_argument("set function has more indices than the ring");
  std::vector<QuotientPoly> linear;
  linear.reserve(subs.size());
  for (int i = 0; i < f.n(); ++i) {
    const Affine& a = subs[i];
    QuotientPoly p(ring, a.c0);
    const std::pair<Tag, const Rational*> parts[] = {{Tag::X, &a.cx}, {Tag::Y, &a.cy}, {Tag::S, &a.cs}};
    for (const auto& [tg, c] : parts) {
      if (*c == 0) continue;
      if (!((ring.active >> i) & 1u) || !ring.allows(tg)) {
        throw std::invalid_argument("substitution uses a variable outside ring " + ring.name());
      }
      Monomial m;
      m.set(i, tg);
      p.add_term(m, *c);
    }
    linear.push_back(std::move(p));
  }
  QuotientPoly out(ring);
  for (const auto& [mask, c] : f.terms()) {
    QuotientPoly term(ring, c);
    for (std::uint32_t b = mask; b && !term.is_zero(); b &= b - 1) {
      term = term * linear[std::countr_zero(b)];
    }
    out = out + term;
  }
  return out;
}

std::vector<Affine> uniform_substitution(int n, const Affine& a) { return std::vector<Affine>(n, a); }

}  // namespace sossubmod
