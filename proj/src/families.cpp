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

#include "sossubmod/families.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sossubmod/rng.hpp"

namespace sossubmod {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

std::uint32_t mask_of(const std::vector<int>& idx, int n, const char* what) {
  std::uint32_t m = 0;
  for (int v : idx) {
    require(v >= 0 && v < n, std::string(what) + ": index out of range");
    m |= 1u << v;
  }
  return m;
}

// Adds c * prod_{v in e} (1 - x_v).
void add_complement_product(SetFunction::Terms& terms, std::uint32_t e, const Rational& c) {
  for (std::uint32_t t = e;; t = (t - 1) & e) {
    terms[t] += (std::popcount(t) % 2 ? -c : c);
    if (t == 0) break;
  }
}

SetFunction from_terms(int n, SetFunction::Terms terms) {
  std::erase_if(terms, [](const auto& kv) { return kv.second == 0; });
  return SetFunction(n, std::move(terms));
}

void check_square(const RationalMatrix& a, const char* what) {
  for (const auto& row : a) require(row.size() == a.size(), std::string(what) + ": matrix must be square");
}

Rational binomial(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return Rational(r);
}

Rational eval_poly(const std::vector<Rational>& c, const Rational& x) {
  Rational r = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

void validate_concave(const family::ConcaveCardinality& c) {
  require(c.n >= 1 && c.n <= kMaxEnumerationN, "ConcaveCardinality: n out of range");
  std::vector<Rational> d2;
  for (std::size_t j = 2; j < c.phi.size(); ++j) d2.push_back(c.phi[j] * Rational(static_cast<long>(j * (j - 1))));
  while (!d2.empty() && d2.back() == 0) d2.pop_back();
  if (d2.empty()) return;
  const Rational hi(c.n);
  require(eval_poly(d2, 0) <= 0 && eval_poly(d2, hi) <= 0, "ConcaveCardinality: phi is not concave on [0, n]");
  if (d2.size() <= 2) return;
  if (d2.size() == 3) {
    // phi'' quadratic: also check its vertex when it lies inside [0, n].
    const Rational v = -d2[1] / (2 * d2[2]);
    if (v > 0 && v < hi) require(eval_poly(d2, v) <= 0, "ConcaveCardinality: phi is not concave on [0, n]");
    return;
  }
  const int samples = 4096;
  for (int k = 1; k < samples; ++k) {
    const Rational x = hi * k / samples;
    require(eval_poly(d2, x) <= 0, "ConcaveCardinality: phi is not concave on [0, n]");
  }
}

void validate_features(const std::vector<std::vector<double>>& z, const char* what) {
  require(!z.empty() && static_cast<int>(z.size()) <= 16, std::string(what) + ": need 1..16 feature vectors");
  for (const auto& v : z) {
    require(v.size() == z.front().size() && !v.empty(), std::string(what) + ": ragged feature vectors");
    for (double e : v) require(std::isfinite(e), std::string(what) + ": non-finite feature");
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

ValueTable synthetic_log_values(const family::SyntheticLog& s) {
  const int n = static_cast<int>(s.z.size());
  std::vector<double> weight(n);
  for (int i = 0; i < n; ++i) {
    for (double e : s.z[i]) weight[i] += e;
  }
  std::vector<Rational> values(std::size_t{1} << n);
  std::vector<double> total(values.size(), 0.0);
  for (std::uint32_t m = 1; m < values.size(); ++m) {
    const int low = std::countr_zero(m);
    total[m] = total[m & (m - 1)] + weight[low];
    values[m] = rational_from_double(std::log(total[m]));
  }
  return ValueTable(n, std::move(values));
}

ValueTable facility_location_values(const family::FacilityLocation& f) {
  const int n = static_cast<int>(f.z.size());
  std::vector<std::vector<double>> cosine(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cosine[i][j] = dot(f.z[i], f.z[j]) / std::sqrt(dot(f.z[i], f.z[i]) * dot(f.z[j], f.z[j]));
    }
  }
  std::vector<Rational> values(std::size_t{1} << n);
  std::vector<std::vector<double>> best(values.size());
  best[0].assign(n, -std::numeric_limits<double>::infinity());
  for (std::uint32_t m = 1; m < values.size(); ++m) {
    const int low = std::countr_zero(m);
    best[m] = best[m & (m - 1)];
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      best[m][i] = std::max(best[m][i], cosine[i][low]);
      sum += best[m][i];
    }
    values[m] = rational_from_double(sum);
  }
  return ValueTable(n, std::move(values));
}

}  // namespace

std::string family_name(const FamilySpec& spec) {
  static const char* names[] = {"GraphCut",       "HypergraphCut",      "Coverage",
                                "ConcaveCardinality", "CounterexampleDeg4", "ProductMonomial",
                                "BudgetAdditive", "ConvolutionWitness", "MonotonizationWitness",
                                "Determinantal",  "SyntheticLog",       "FacilityLocation"};
  return names[spec.index()];
}

int family_size(const FamilySpec& spec) {
  return std::visit(overloaded{
                        [](const family::GraphCut& g) { return static_cast<int>(g.adjacency.size()); },
                        [](const family::HypergraphCut& h) { return h.n; },
                        [](const family::Coverage& c) { return static_cast<int>(c.sets.size()); },
                        [](const family::ConcaveCardinality& c) { return c.n; },
                        [](const family::CounterexampleDeg4& c) { return c.n; },
                        [](const family::ProductMonomial& p) { return p.n; },
                        [](const family::BudgetAdditive& b) { return b.n; },
                        [](const family::ConvolutionWitness& c) { return c.n; },
                        [](const family::MonotonizationWitness& m) { return m.n; },
                        [](const family::Determinantal& d) { return static_cast<int>(d.sigma_matrix.size()); },
                        [](const family::SyntheticLog& s) { return static_cast<int>(s.z.size()); },
                        [](const family::FacilityLocation& f) { return static_cast<int>(f.z.size()); },
                    },
                    spec);
}

void validate(const FamilySpec& spec) {
  auto check_n = [](int n, int lo, const char* what) {
    require(n >= lo && n <= kMaxStorageN, std::string(what) + ": n out of range");
  };
  std::visit(overloaded{
                 [&](const family::GraphCut& g) {
                   const int n = static_cast<int>(g.adjacency.size());
                   check_n(n, 1, "GraphCut");
                   check_square(g.adjacency, "GraphCut");
                   for (int i = 0; i < n; ++i) {
                     for (int j = 0; j < n; ++j) {
                       require(g.adjacency[i][j] >= 0, "GraphCut: weights must be nonnegative");
                       require(g.adjacency[i][j] == g.adjacency[j][i], "GraphCut: adjacency must be symmetric");
                     }
                   }
                 },
                 [&](const family::HypergraphCut& h) {
                   check_n(h.n, 1, "HypergraphCut");
                   require(h.edges.size() == h.weights.size(), "HypergraphCut: one weight per edge");
                   for (const auto& e : h.edges) {
                     require(!e.empty(), "HypergraphCut: empty edge");
                     require(std::popcount(mask_of(e, h.n, "HypergraphCut")) == static_cast<int>(e.size()),
                             "HypergraphCut: repeated vertex in edge");
                   }
                   for (const auto& w : h.weights) require(w >= 0, "HypergraphCut: weights must be nonnegative");
                 },
                 [&](const family::Coverage& c) {
                   check_n(static_cast<int>(c.sets.size()), 1, "Coverage");
                   require(c.m >= 0, "Coverage: ground size must be nonnegative");
                   for (const auto& s : c.sets) {
                     for (int e : s) require(e >= 0 && e < c.m, "Coverage: element out of range");
                   }
                 },
                 [&](const family::ConcaveCardinality& c) { validate_concave(c); },
                 [&](const family::CounterexampleDeg4& c) { check_n(c.n, 4, "CounterexampleDeg4"); },
                 [&](const family::ProductMonomial& p) { check_n(p.n, 1, "ProductMonomial"); },
                 [&](const family::BudgetAdditive& b) { check_n(b.n, 2, "BudgetAdditive"); },
                 [&](const family::ConvolutionWitness& c) { check_n(c.n, 2, "ConvolutionWitness"); },
                 [&](const family::MonotonizationWitness& m) { check_n(m.n, 2, "MonotonizationWitness"); },
                 [&](const family::Determinantal& d) {
                   const int n = static_cast<int>(d.sigma_matrix.size());
                   require(n >= 1 && n <= kMaxPairwiseN, "Determinantal: n out of range");
                   check_square(d.sigma_matrix, "Determinantal");
                   require(d.sigma > 0, "Determinantal: sigma must be positive");
                   require(is_symmetric_positive_definite(d.sigma_matrix),
                           "Determinantal: covariance must be symmetric positive definite");
                 },
                 [&](const family::SyntheticLog& s) {
                   validate_features(s.z, "SyntheticLog");
                   for (const auto& v : s.z) {
                     double w = 0.0;
                     for (double e : v) w += e;
                     require(w > 0, "SyntheticLog: feature sums must be positive");
                   }
                 },
                 [&](const family::FacilityLocation& f) {
                   validate_features(f.z, "FacilityLocation");
                   for (const auto& v : f.z) require(dot(v, v) > 0, "FacilityLocation: zero feature vector");
                 },
             },
             spec);
}

bool is_polynomial_family(const FamilySpec& spec) {
  return !std::holds_alternative<family::SyntheticLog>(spec) && !std::holds_alternative<family::FacilityLocation>(spec);
}

SetFunction build(const FamilySpec& spec) {
  validate(spec);
  if (!is_polynomial_family(spec)) return mle_from_values(build_values(spec));
  const int n = family_size(spec);
  const std::uint32_t all = SubsetMask::full(n).bits;
  SetFunction::Terms terms;
  std::visit(overloaded{
                 [&](const family::GraphCut& g) {
                   for (int i = 0; i < n; ++i) {
                     for (int j = i + 1; j < n; ++j) {
                       const Rational& w = g.adjacency[i][j];
                       terms[1u << i] += w;
                       terms[1u << j] += w;
                       terms[(1u << i) | (1u << j)] -= 2 * w;
                     }
                   }
                 },
                 [&](const family::HypergraphCut& h) {
                   for (std::size_t k = 0; k < h.edges.size(); ++k) {
                     const std::uint32_t e = mask_of(h.edges[k], n, "HypergraphCut");
                     terms[0] += h.weights[k];
                     terms[e] -= h.weights[k];
                     add_complement_product(terms, e, -h.weights[k]);
                   }
                 },
                 [&](const family::Coverage& c) {
                   std::vector<std::uint32_t> owners(c.m, 0);
                   for (int i = 0; i < n; ++i) {
                     for (int e : c.sets[i]) owners[e] |= 1u << i;
                   }
                   for (std::uint32_t o : owners) {
                     if (o == 0) continue;
                     terms[0] += 1;
                     add_complement_product(terms, o, -1);
                   }
                 },
                 [&](const family::ConcaveCardinality& c) {
                   // a(T) is the |T|-th forward difference of phi at 0.
                   const int deg = static_cast<int>(c.phi.size()) - 1;
                   std::vector<Rational> level(std::min(n, std::max(deg, 0)) + 1);
                   for (std::size_t k = 0; k < level.size(); ++k) {
                     for (std::size_t j = 0; j <= k; ++j) {
                       const Rational v = eval_poly(c.phi, Rational(static_cast<long>(j))) *
                                          binomial(static_cast<int>(k), static_cast<int>(j));
                       level[k] += (k - j) % 2 ? -v : v;
                     }
                   }
                   for (std::uint32_t t = 0; t <= all; ++t) {
                     const std::size_t k = std::popcount(t);
                     if (k < level.size() && level[k] != 0) terms[t] = level[k];
                   }
                 },
                 [&](const family::CounterexampleDeg4& c) {
                   const bool odd = n % 2 == 1;
                   const Rational constant = Rational(odd ? n * n - 4 * n + 3 : (n - 2) * (n - 4)) / 4;
                   const Rational mult = odd ? n - 3 : n - 4;
                   const std::uint32_t a = 1u << (n - 2);
                   const std::uint32_t b = 1u << (n - 1);
                   terms[a | b] -= constant;
                   for (int i = 0; i < n - 2; ++i) {
                     for (int j = i + 1; j < n - 2; ++j) terms[(1u << i) | (1u << j) | a | b] -= 2;
                     terms[(1u << i) | a | b] += mult;
                     terms[(1u << i) | a] -= mult;
                     terms[(1u << i) | b] -= mult;
                   }
                   (void)c;
                 },
                 [&](const family::ProductMonomial&) { terms[all] = 1; },
                 [&](const family::BudgetAdditive&) {
                   for (int i = 0; i < n; ++i) terms[1u << i] += 2;
                   terms[all] -= 1;
                 },
                 [&](const family::ConvolutionWitness&) {
                   terms[0] += 1;
                   terms[all] -= 1;
                 },
                 [&](const family::MonotonizationWitness&) {
                   terms[0] += 1;
                   add_complement_product(terms, all, -1);
                 },
                 [&](const family::Determinantal& d) {
                   const Rational inv = 1 / (d.sigma * d.sigma);
                   for (std::uint32_t t = 0; t <= all; ++t) {
                     Rational scale = 1;
                     for (int k = std::popcount(t); k > 0; --k) scale *= inv;
                     terms[t] = t == 0 ? Rational(1) : determinant(principal_submatrix(d.sigma_matrix, SubsetMask(t))) * scale;
                   }
                 },
                 [&](const auto&) { throw std::logic_error("unreachable"); },
             },
             spec);
  return from_terms(n, std::move(terms));
}

ValueTable build_values(const FamilySpec& spec) {
  validate(spec);
  if (const auto* s = std::get_if<family::SyntheticLog>(&spec)) return synthetic_log_values(*s);
  if (const auto* f = std::get_if<family::FacilityLocation>(&spec)) return facility_location_values(*f);
  check_capacity(family_size(spec), kMaxEnumerationN, "build_values");
  return values_from_mle(build(spec));
}

std::optional<int> expected_minimal_t(const FamilySpec& spec) {
  validate(spec);
  const int n = family_size(spec);
  auto half_ceil = [](int a) { return a <= 0 ? 0 : (a + 1) / 2; };
  return std::visit(
      overloaded{
          [](const family::GraphCut&) -> std::optional<int> { return 0; },
          [](const family::HypergraphCut& h) -> std::optional<int> {
            std::size_t tau = 0;
            for (const auto& e : h.edges) tau = std::max(tau, e.size());
            // 2 floor(tau/2 - 1), clamped at zero.
            return std::max(0, 2 * (static_cast<int>(tau) / 2 - 1));
          },
          [&](const family::Coverage& c) -> std::optional<int> {
            std::vector<int> mult(c.m, 0);
            for (const auto& s : c.sets) {
              for (int e : s) ++mult[e];
            }
            const int tau = mult.empty() ? 0 : *std::max_element(mult.begin(), mult.end());
            return std::max(0, tau - 2);
          },
          [&](const family::ConcaveCardinality& c) -> std::optional<int> {
            int deg = static_cast<int>(c.phi.size()) - 1;
            while (deg > 0 && c.phi[deg] == 0) --deg;
            if (deg <= 2) return 0;
            return half_ceil(deg);
          },
          [&](const family::CounterexampleDeg4&) -> std::optional<int> {
            const int level = n % 2 ? half_ceil(n - 2) : half_ceil(n - 1);
            return std::max(2, level);
          },
          [](const family::ProductMonomial& p) -> std::optional<int> {
            if (p.n <= 1) return 0;
            return std::nullopt;
          },
          [&](const family::BudgetAdditive&) -> std::optional<int> { return n - 2; },
          [&](const family::ConvolutionWitness&) -> std::optional<int> { return n - 2; },
          [&](const family::MonotonizationWitness&) -> std::optional<int> { return n - 2; },
          [](const family::Determinantal&) -> std::optional<int> { return std::nullopt; },
          [](const family::SyntheticLog&) -> std::optional<int> { return std::nullopt; },
          [](const family::FacilityLocation&) -> std::optional<int> { return std::nullopt; },
      },
      spec);
}

Rational determinant(const RationalMatrix& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  RationalMatrix m = a;
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && m[pivot][c] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != c) {
      std::swap(m[pivot], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      const Rational factor = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= factor * m[c][k];
    }
  }
  return det;
}

RationalMatrix principal_submatrix(const RationalMatrix& a, SubsetMask s) {
  const std::vector<int> idx = s.indices();
  RationalMatrix out(idx.size(), std::vector<Rational>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r) {
    for (std::size_t c = 0; c < idx.size(); ++c) out[r][c] = a[idx[r]][idx[c]];
  }
  return out;
}

bool is_symmetric_positive_definite(const RationalMatrix& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) return false;
    for (std::size_t j = 0; j < n; ++j) {
      if (a[i][j] != a[j][i]) return false;
    }
  }
  RationalMatrix m = a;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[c][c] <= 0) return false;
    for (std::size_t r = c + 1; r < n; ++r) {
      const Rational factor = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= factor * m[c][k];
    }
  }
  return true;
}

RationalMatrix random_spd(int n, std::uint64_t seed) {
  require(n >= 1, "random_spd: n must be positive");
  Rng rng(seed);
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  }
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  Eigen::VectorXd lambda(n);
  for (int i = 0; i < n; ++i) {
    do {
      lambda(i) = rng.uniform();
    } while (lambda(i) < 1e-6);
  }
  const Eigen::MatrixXd s = q * lambda.asDiagonal() * q.transpose();
  RationalMatrix out(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      out[i][j] = rational_from_double(0.5 * (s(i, j) + s(j, i)));
      out[j][i] = out[i][j];
    }
  }
  return out;
}

std::vector<std::vector<double>> random_features(int n, int dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> z(n, std::vector<double>(dim));
  for (auto& v : z) {
    for (double& e : v) e = rng.uniform();
  }
  return z;
}

SetFunction random_setfunction(int n, int d, double lo, double hi, std::uint64_t seed) {
  require(n >= 0 && n <= kMaxStorageN && d >= 0 && d <= n, "random_setfunction: bad n or d");
  Rng rng(seed);
  SetFunction::Terms terms;
  for (std::uint32_t t = 0; t <= SubsetMask::full(n).bits; ++t) {
    if (std::popcount(t) > d) continue;
    const long milli = std::lround(rng.uniform(lo, hi) * 1000.0);
    if (milli != 0) terms[t] = Rational(milli) / 1000;
    if (n == 0) break;
  }
  return SetFunction(n, std::move(terms));
}

}  // namespace sossubmod
