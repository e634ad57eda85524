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

#include "sossubmod/setfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sossubmod {

void check_capacity(int n, int limit, const char* what) {
  if (n > limit) {
    throw CapacityError(std::string(what) + ": n=" + std::to_string(n) +
                        " exceeds the supported maximum of " + std::to_string(limit));
  }
}

SubsetMask SubsetMask::from_indices(std::span<const int> indices) {
  std::uint32_t b = 0;
  for (int i : indices) {
    if (i < 0 || i >= 32) throw std::out_of_range("subset index out of range");
    b |= 1u << i;
  }
  return SubsetMask(b);
}

std::vector<int> SubsetMask::indices() const {
  std::vector<int> out;
  for (std::uint32_t b = bits; b; b &= b - 1) out.push_back(std::countr_zero(b));
  return out;
}

ValueTable::ValueTable(int n_, std::vector<Rational> v) : n(n_), values(std::move(v)) {
  if (n < 0) throw std::invalid_argument("negative ground-set size");
  check_capacity(n, kMaxStorageN, "value table");
  if (values.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("value table must have exactly 2^n entries");
  }
}

std::vector<double> ValueTable::to_double() const {
  std::vector<double> out(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) out[k] = values[k].get_d();
  return out;
}

SetFunction::SetFunction(int n) : SetFunction(n, Terms{}) {}

SetFunction::SetFunction(int n, Terms terms) : n_(n) {
  if (n < 0) throw std::invalid_argument("negative ground-set size");
  check_capacity(n, kMaxStorageN, "set function");
  const std::uint32_t full = SubsetMask::full(n).bits;
  for (auto& [mask, c] : terms) {
    if (mask & ~full) throw std::invalid_argument("term mask exceeds ground set");
    c.canonicalize();
    if (c == 0) continue;
    degree_ = std::max(degree_, std::popcount(mask));
    terms_d_.emplace_back(mask, c.get_d());
    terms_.emplace(mask, std::move(c));
  }
}

Rational SetFunction::coeff(SubsetMask t) const {
  auto it = terms_.find(t.bits);
  return it == terms_.end() ? Rational(0) : it->second;
}

double SetFunction::coeff_d(SubsetMask t) const {
  auto it = terms_.find(t.bits);
  return it == terms_.end() ? 0.0 : it->second.get_d();
}

Rational SetFunction::value(SubsetMask s) const {
  Rational v = 0;
  for (const auto& [mask, c] : terms_) {
    if ((mask & ~s.bits) == 0) v += c;
  }
  return v;
}

double SetFunction::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("point dimension does not match n");
  double total = 0.0;
  for (const auto& [mask, c] : terms_d_) {
    double p = c;
    for (std::uint32_t b = mask; b; b &= b - 1) p *= x[std::countr_zero(b)];
    total += p;
  }
  return total;
}

SetFunction SetFunction::operator+(const SetFunction& o) const {
  if (n_ != o.n_) throw std::invalid_argument("ground-set sizes differ");
  Terms t = terms_;
  for (const auto& [mask, c] : o.terms_) t[mask] += c;
  return SetFunction(n_, std::move(t));
}

SetFunction SetFunction::operator-(const SetFunction& o) const { return *this + (-o); }

SetFunction SetFunction::operator-() const { return scaled(Rational(-1)); }

SetFunction SetFunction::scaled(const Rational& c) const {
  Terms t;
  if (c != 0) {
    for (const auto& [mask, a] : terms_) t.emplace(mask, a * c);
  }
  return SetFunction(n_, std::move(t));
}

SetFunction mle_from_values(const ValueTable& v) {
  check_capacity(v.n, kMaxStorageN, "mle_from_values");
  std::vector<Rational> a = v.values;
  const std::size_t size = a.size();
  for (int i = 0; i < v.n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t m = 0; m < size; ++m) {
      if (m & bit) a[m] -= a[m ^ bit];
    }
  }
  SetFunction::Terms terms;
  for (std::size_t m = 0; m < size; ++m) {
    if (a[m] != 0) terms.emplace(static_cast<std::uint32_t>(m), std::move(a[m]));
  }
  return SetFunction(v.n, std::move(terms));
}

ValueTable values_from_mle(const SetFunction& f) {
  check_capacity(f.n(), kMaxStorageN, "values_from_mle");
  std::vector<Rational> v(std::size_t{1} << f.n());
  for (const auto& [mask, c] : f.terms()) v[mask] = c;
  for (int i = 0; i < f.n(); ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t m = 0; m < v.size(); ++m) {
      if (m & bit) v[m] += v[m ^ bit];
    }
  }
  return ValueTable(f.n(), std::move(v));
}

std::vector<double> values_from_mle_d(const SetFunction& f) {
  check_capacity(f.n(), kMaxStorageN, "values_from_mle");
  std::vector<double> v(std::size_t{1} << f.n(), 0.0);
  for (const auto& [mask, c] : f.terms_d()) v[mask] = c;
  for (int i = 0; i < f.n(); ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t m = 0; m < v.size(); ++m) {
      if (m & bit) v[m] += v[m ^ bit];
    }
  }
  return v;
}

double evaluate(const SetFunction& f, std::span<const double> x) { return f.evaluate(x); }

SetFunction partial(const SetFunction& f, int i) {
  if (i < 0 || i >= f.n()) throw std::out_of_range("partial: index out of range");
  const std::uint32_t bit = 1u << i;
  SetFunction::Terms t;
  for (const auto& [mask, c] : f.terms()) {
    if (mask & bit) t.emplace(mask ^ bit, c);
  }
  return SetFunction(f.n(), std::move(t));
}

SetFunction second_partial(const SetFunction& f, int i, int j) {
  if (i == j) throw std::invalid_argument("second_partial requires i != j");
  return partial(partial(f, i), j);
}

namespace {

// Value table scaled to a common integer denominator. Uses int64 when the
// magnitudes leave enough headroom for the sums formed by the brute-force
// conditions, big integers otherwise.
struct ScaledTable {
  mpz_class denom = 1;
  std::vector<std::int64_t> small;
  std::vector<mpz_class> big;
  bool use_small = false;
};

ScaledTable scaled_values(const SetFunction& f) {
  ValueTable vt = values_from_mle(f);
  ScaledTable out;
  for (const auto& v : vt.values) {
    mpz_lcm(out.denom.get_mpz_t(), out.denom.get_mpz_t(), v.get_den_mpz_t());
  }
  out.big.resize(vt.values.size());
  mpz_class max_abs = 0;
  for (std::size_t k = 0; k < vt.values.size(); ++k) {
    out.big[k] = vt.values[k].get_num() * (out.denom / vt.values[k].get_den());
    mpz_class a = abs(out.big[k]);
    if (a > max_abs) max_abs = a;
  }
  // sums below involve at most 4n + 4 table entries
  const long headroom = std::numeric_limits<std::int64_t>::max() / (4 * (f.n() + 2));
  if (max_abs <= headroom) {
    out.use_small = true;
    out.small.resize(out.big.size());
    for (std::size_t k = 0; k < out.big.size(); ++k) out.small[k] = out.big[k].get_si();
    out.big.clear();
  }
  return out;
}

template <typename T>
bool check_condition_impl(const std::vector<T>& f, int n, Condition which) {
  const std::uint32_t full = SubsetMask::full(n).bits;
  auto d = [&](std::uint32_t x, int i) -> T {
    const std::uint32_t bit = 1u << i;
    return T(f[x | bit] - f[x & ~bit]);
  };
  switch (which) {
    case Condition::I:
      for (std::uint32_t x = 0; x <= full; ++x) {
        for (std::uint32_t y = 0; y <= full; ++y) {
          if (T(f[x] + f[y]) < T(f[x | y] + f[x & y])) return false;
        }
      }
      return true;
    case Condition::II:
      for (std::uint32_t y = 0; y <= full; ++y) {
        for (std::uint32_t x = y;; x = (x - 1) & y) {
          for (int i = 0; i < n; ++i) {
            if (d(x, i) < d(y, i)) return false;
          }
          if (x == 0) break;
        }
      }
      return true;
    case Condition::III:
      for (std::uint32_t x = 0; x <= full; ++x) {
        for (int i = 0; i < n; ++i) {
          for (int j = i + 1; j < n; ++j) {
            const std::uint32_t bi = 1u << i, bj = 1u << j;
            const std::uint32_t base = x & ~(bi | bj);
            T second = T(f[base | bi | bj] - f[base | bi]);
            second -= T(f[base | bj] - f[base]);
            if (second > 0) return false;
          }
        }
      }
      return true;
    case Condition::IV:
      for (std::uint32_t x = 0; x <= full; ++x) {
        for (std::uint32_t y = 0; y <= full; ++y) {
          T lhs = T(f[x] - f[y]);
          for (int i = 0; i < n; ++i) {
            const std::uint32_t bit = 1u << i;
            if ((y & bit) && !(x & bit)) lhs += d(x, i);
            if ((x & bit) && !(y & bit)) lhs -= d(x | y, i);
          }
          if (lhs < 0) return false;
        }
      }
      return true;
    case Condition::V:
    case Condition::VI:
      for (std::uint32_t y = 0; y <= full; ++y) {
        for (std::uint32_t x = y;; x = (x - 1) & y) {
          T lhs = which == Condition::V ? T(f[x] - f[y]) : T(f[y] - f[x]);
          for (std::uint32_t b = y & ~x; b; b &= b - 1) {
            const int i = std::countr_zero(b);
            if (which == Condition::V) {
              lhs += d(x, i);
            } else {
              lhs -= d(y, i);
            }
          }
          if (lhs < 0) return false;
          if (x == 0) break;
        }
      }
      return true;
    case Condition::VII:
      for (std::uint32_t x = 0; x <= full; ++x) {
        for (std::uint32_t y = 0; y <= full; ++y) {
          T lhs = T(f[y] - f[x]);
          for (int i = 0; i < n; ++i) {
            const std::uint32_t bit = 1u << i;
            if ((y & bit) && !(x & bit)) lhs -= d(y, i);
            if ((x & bit) && !(y & bit)) lhs += d(x & y, i);
          }
          if (lhs < 0) return false;
        }
      }
      return true;
  }
  throw std::invalid_argument("unknown condition");
}

// Largest scaled second derivative over all pairs and vertices, with the
// arg-max pair and vertex.
template <typename T>
void scan_second_derivatives(const std::vector<T>& f, int n, T& best, int& bi_out, int& bj_out,
                             std::uint32_t& vertex, bool& modular) {
  bool first = true;
  modular = true;
  const std::uint32_t full = SubsetMask::full(n).bits;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const std::uint32_t bi = 1u << i, bj = 1u << j;
      for (std::uint32_t x = 0; x <= full; ++x) {
        if (x & (bi | bj)) continue;
        T second = T(f[x | bi | bj] - f[x | bi]);
        second -= T(f[x | bj] - f[x]);
        if (second != 0) modular = false;
        if (first || second > best) {
          best = second;
          bi_out = i;
          bj_out = j;
          vertex = x;
          first = false;
        }
      }
    }
  }
}

struct SecondDerivativeScan {
  Rational max_value = 0;
  int i = -1;
  int j = -1;
  std::uint32_t vertex = 0;
  bool modular = true;
};

SecondDerivativeScan scan(const SetFunction& f) {
  check_capacity(f.n(), kMaxEnumerationN, "brute-force submodularity check");
  SecondDerivativeScan out;
  if (f.n() < 2) return out;
  ScaledTable st = scaled_values(f);
  if (st.use_small) {
    std::int64_t best = 0;
    scan_second_derivatives(st.small, f.n(), best, out.i, out.j, out.vertex, out.modular);
    out.max_value = Rational(mpz_class(static_cast<long>(best)), st.denom);
  } else {
    mpz_class best = 0;
    scan_second_derivatives(st.big, f.n(), best, out.i, out.j, out.vertex, out.modular);
    out.max_value = Rational(best, st.denom);
  }
  out.max_value.canonicalize();
  return out;
}

}  // namespace

BruteForceResult brute_force_submodular(const SetFunction& f) {
  SecondDerivativeScan s = scan(f);
  BruteForceResult r;
  r.modular = s.modular;
  r.submodular = s.max_value <= 0;
  if (!r.submodular) {
    r.witness = SubmodularityWitness{s.i, s.j, SubsetMask(s.vertex), s.max_value};
  }
  return r;
}

Rational max_second_derivative(const SetFunction& f) { return scan(f).max_value; }

bool check_condition(const SetFunction& f, Condition which) {
  check_capacity(f.n(), kMaxPairwiseN, "check_condition");
  ScaledTable st = scaled_values(f);
  if (st.use_small) return check_condition_impl(st.small, f.n(), which);
  return check_condition_impl(st.big, f.n(), which);
}

SetFunction complement(const SetFunction& f) {
  // F(1 - x): each term a(T) prod_{i in T} (1 - x_i) expands over subsets of T.
  SetFunction::Terms t;
  for (const auto& [mask, c] : f.terms()) {
    for (std::uint32_t u = mask;; u = (u - 1) & mask) {
      if (std::popcount(u) % 2 == 0) {
        t[u] += c;
      } else {
        t[u] -= c;
      }
      if (u == 0) break;
    }
  }
  return SetFunction(f.n(), std::move(t));
}

SetFunction restrict_to(const SetFunction& f, SubsetMask a) {
  SetFunction::Terms t;
  for (const auto& [mask, c] : f.terms()) {
    if ((mask & ~a.bits) == 0) t.emplace(mask, c);
  }
  return SetFunction(f.n(), std::move(t));
}

SetFunction contract(const SetFunction& f, SubsetMask a) {
  SetFunction::Terms t;
  for (const auto& [mask, c] : f.terms()) t[mask & ~a.bits] += c;
  t[0] -= f.value(a);
  return SetFunction(f.n(), std::move(t));
}

SetFunction scale_add(std::span<const std::pair<Rational, SetFunction>> parts) {
  if (parts.empty()) throw std::invalid_argument("scale_add: no functions given");
  SetFunction acc(parts.front().second.n());
  for (const auto& [w, g] : parts) {
    if (w < 0) throw std::invalid_argument("scale_add: weights must be nonnegative");
    acc = acc + g.scaled(w);
  }
  return acc;
}

SetFunction truncate(const SetFunction& f, int k) {
  if (k < 0) throw std::invalid_argument("truncate: negative degree");
  SetFunction::Terms t;
  for (const auto& [mask, c] : f.terms()) {
    if (std::popcount(mask) <= k) t.emplace(mask, c);
  }
  return SetFunction(f.n(), std::move(t));
}

SetFunction repair_submodularity(const SetFunction& f, double tol, double* shift) {
  if (shift) *shift = 0.0;
  if (f.n() < 2) return f;
  const int n = f.n();
  ScaledTable st = scaled_values(f);
  SetFunction::Terms t = f.terms();
  bool changed = false;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const std::uint32_t bi = 1u << i, bj = 1u << j;
      mpz_class best = 0;
      for (std::uint32_t x = 0; x < (1u << n); ++x) {
        if (x & (bi | bj)) continue;
        mpz_class second;
        if (st.use_small) {
          second = static_cast<long>(st.small[x | bi | bj] - st.small[x | bi] - st.small[x | bj] + st.small[x]);
        } else {
          second = st.big[x | bi | bj] - st.big[x | bi] - st.big[x | bj] + st.big[x];
        }
        if (second > best) best = second;
      }
      if (best > 0) {
        Rational v(best, st.denom);
        v.canonicalize();
        if (v.get_d() > tol) return f;
        worst = std::max(worst, v.get_d());
        t[bi | bj] -= v;
        changed = true;
      }
    }
  }
  if (!changed) return f;
  if (shift) *shift = worst;
  return SetFunction(n, std::move(t));
}

}  // namespace sossubmod
