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

#include "sossubmod/certify.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "sossubmod/parallel.hpp"

namespace sossubmod {

namespace {

int ceil_half(int a) { return a >= 0 ? (a + 1) / 2 : -((-a) / 2); }

CertVerdict combine(const std::vector<SosVerdict>& verdicts) {
  bool indeterminate = false;
  for (SosVerdict v : verdicts) {
    if (v == SosVerdict::NOT_SOS) return CertVerdict::NOT_SOS;
    if (v == SosVerdict::INDETERMINATE) indeterminate = true;
  }
  return indeterminate ? CertVerdict::INDETERMINATE : CertVerdict::CERTIFIED;
}

// Embeds a certificate into the basis of a higher level by zero padding.
GramCertificate pad_certificate(const GramCertificate& cert, int t) {
  GramCertificate out;
  out.ring = cert.ring;
  out.t = t;
  out.basis = basis(cert.ring, t);
  out.residual = cert.residual;
  out.min_eigenvalue = cert.min_eigenvalue;
  std::unordered_map<std::uint64_t, int> position;
  for (std::size_t k = 0; k < out.basis.size(); ++k) position[out.basis[k].code] = static_cast<int>(k);
  out.Q = Eigen::MatrixXd::Zero(out.basis.size(), out.basis.size());
  for (std::size_t a = 0; a < cert.basis.size(); ++a) {
    for (std::size_t b = 0; b < cert.basis.size(); ++b) {
      out.Q(position.at(cert.basis[a].code), position.at(cert.basis[b].code)) = cert.Q(a, b);
    }
  }
  return out;
}

SubmodCertReport certify_pairs(const SetFunction& f, int t, const ToleranceProfile& tol, int jobs,
                               const SubmodCertReport* previous) {
  SubmodCertReport report;
  report.n = f.n();
  report.t = t;
  const int n = f.n();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) report.pairs.push_back(PairResult{i, j, {}});
  }
  parallel_for(report.pairs.size(), jobs, [&](std::size_t k) {
    PairResult& pr = report.pairs[k];
    if (previous && previous->pairs[k].sos.verdict == SosVerdict::SOS && previous->pairs[k].sos.certificate) {
      pr.sos = previous->pairs[k].sos;
      pr.sos.certificate = pad_certificate(*previous->pairs[k].sos.certificate, t);
      pr.sos.diagnostics = "carried from level " + std::to_string(previous->t);
      return;
    }
    pr.sos = sos_feasibility_margin(pair_target(f, pr.i, pr.j), t, tol);
  });
  std::vector<SosVerdict> verdicts;
  for (const auto& pr : report.pairs) verdicts.push_back(pr.sos.verdict);
  report.verdict = combine(verdicts);
  return report;
}

}  // namespace

TRange t_range(int d, int n) {
  if (d < 0 || d > n) throw std::invalid_argument("t_range requires 0 <= d <= n");
  return TRange{std::max(0, ceil_half(d - 2)), std::max(0, ceil_half(n + d - 5))};
}

const char* to_string(CertVerdict v) {
  switch (v) {
    case CertVerdict::CERTIFIED:
      return "CERTIFIED";
    case CertVerdict::NOT_SOS:
      return "NOT_SOS";
    case CertVerdict::INDETERMINATE:
      return "INDETERMINATE";
  }
  return "UNKNOWN";
}

const char* to_string(MinimalTStatus s) {
  switch (s) {
    case MinimalTStatus::FOUND:
      return "FOUND";
    case MinimalTStatus::NOT_SUBMODULAR:
      return "NOT_SUBMODULAR";
    case MinimalTStatus::CERT_GAP:
      return "CERT_GAP";
  }
  return "UNKNOWN";
}

QuotientPoly pair_target(const SetFunction& f, int i, int j) {
  const Ring ring = Ring::i2(f.n()).without(SubsetMask((1u << i) | (1u << j)));
  std::vector<Affine> subs = uniform_substitution(f.n(), Affine::x());
  subs[i] = Affine::constant(0);
  subs[j] = Affine::constant(0);
  return embed_setfunction(-second_partial(f, i, j), subs, ring);
}

std::vector<PairGram> add_tsos_submodularity(ConicProblem& problem, int n, int t, const SetFunction& base,
                                             const std::vector<CoefficientVar>& vars) {
  std::vector<PairGram> out;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const std::uint32_t pair = (1u << i) | (1u << j);
      const Ring ring = Ring::i2(n).without(SubsetMask(pair));
      PairGram pg{i, j, add_gram_block(problem, ring, t)};
      // Target monomial code (x tags on the mask) -> row.
      std::map<std::uint64_t, ConstraintRow> rows;
      auto code_of = [](std::uint32_t mask) {
        Monomial m;
        for (std::uint32_t b = mask; b; b &= b - 1) m.set(std::countr_zero(b), Tag::X);
        return m.code;
      };
      for (const auto& [code, terms] : pg.gram.products) rows[code].matrix_terms = terms;
      for (const auto& [mask, c] : base.terms()) {
        if ((mask & pair) != pair) continue;
        rows[code_of(mask & ~pair)].rhs -= c.get_d();
      }
      for (const auto& v : vars) {
        if ((v.mask & pair) != pair) continue;
        rows[code_of(v.mask & ~pair)].free_terms.push_back({v.free_index, v.sign});
      }
      for (auto& [code, row] : rows) {
        if (row.matrix_terms.empty() && row.free_terms.empty()) {
          if (row.rhs != 0.0) throw std::invalid_argument("fixed part of the function is not reachable at this t");
          continue;
        }
        problem.rows.push_back(std::move(row));
      }
      out.push_back(std::move(pg));
    }
  }
  return out;
}

SubmodCertReport report_from_solution(const SetFunction& f, int t, const std::vector<PairGram>& grams,
                                      const ConicSolution& sol, const ToleranceProfile& tol) {
  SubmodCertReport report;
  report.n = f.n();
  report.t = t;
  std::vector<SosVerdict> verdicts;
  for (const auto& pg : grams) {
    PairResult pr{pg.i, pg.j, {}};
    const QuotientPoly target = pair_target(f, pg.i, pg.j);
    GramCertificate cert;
    cert.ring = pg.gram.ring;
    cert.t = t;
    cert.basis = pg.gram.basis;
    cert.Q = psd_projection(sol.X[pg.gram.block], &cert.min_eigenvalue);
    cert.residual = gram_residual(target, cert.basis, cert.Q);
    pr.sos.solver_status = sol.status;
    pr.sos.iterations = sol.iterations;
    if (cert.residual <= tol.verify_scale * coefficient_scale(target)) {
      pr.sos.verdict = SosVerdict::SOS;
      pr.sos.certificate = std::move(cert);
    } else {
      // Fall back to an independent solve for this pair.
      pr.sos = sos_feasibility_margin(target, t, tol);
    }
    verdicts.push_back(pr.sos.verdict);
    report.pairs.push_back(std::move(pr));
  }
  report.verdict = combine(verdicts);
  return report;
}

SubmodCertReport is_t_sos_submodular(const SetFunction& f, int t, const ToleranceProfile& tol, int jobs) {
  if (t < 0) throw std::invalid_argument("t must be nonnegative");
  check_capacity(f.n(), kMaxEnumerationN, "is_t_sos_submodular");
  return certify_pairs(f, t, tol, jobs, nullptr);
}

MinimalTResult minimal_t(const SetFunction& f, const ToleranceProfile& tol, int jobs) {
  MinimalTResult out;
  out.range = t_range(f.degree(), f.n());
  const BruteForceResult bf = brute_force_submodular(f);
  out.modular = bf.modular;
  if (!bf.submodular) {
    out.status = MinimalTStatus::NOT_SUBMODULAR;
    out.witness = bf.witness;
    return out;
  }
  const SubmodCertReport* previous = nullptr;
  for (int t = out.range.t_min; t <= out.range.t_max; ++t) {
    out.reports.push_back(certify_pairs(f, t, tol, jobs, previous));
    const SubmodCertReport& r = out.reports.back();
    if (r.verdict == CertVerdict::CERTIFIED) {
      out.status = MinimalTStatus::FOUND;
      out.t = t;
      return out;
    }
    if (r.verdict == CertVerdict::INDETERMINATE) {
      out.diagnostics += "level " + std::to_string(t) + " indeterminate; ";
    }
    previous = &out.reports.back();
  }
  out.status = MinimalTStatus::CERT_GAP;
  out.diagnostics += "submodular by enumeration but no level in range certified";
  return out;
}

const char* to_string(Characterization c) {
  switch (c) {
    case Characterization::G:
      return "G";
    case Characterization::DDIFF:
      return "ddiff";
    case Characterization::G1:
      return "G1";
    case Characterization::H1:
      return "H1";
    case Characterization::H2:
      return "H2";
    case Characterization::G2:
      return "G2";
  }
  return "unknown";
}

Characterization characterization_from_string(const std::string& s) {
  for (Characterization c : {Characterization::G, Characterization::DDIFF, Characterization::G1,
                             Characterization::H1, Characterization::H2, Characterization::G2}) {
    if (s == to_string(c)) return c;
  }
  throw std::invalid_argument("unknown characterization '" + s + "'");
}

std::vector<CharacterizationPolynomial> characterization_polynomials(const SetFunction& f, Characterization which,
                                                                    int t) {
  const int n = f.n();
  const Affine sum{0, 1, 1, -1};  // x + y - s
  auto embed = [&](const SetFunction& g, const Affine& a, const Ring& ring, int skip = -1) {
    std::vector<Affine> subs = uniform_substitution(n, a);
    if (skip >= 0) subs[skip] = Affine::constant(0);
    return embed_setfunction(g, subs, ring);
  };
  auto linear = [&](const Ring& ring, int i, Tag plus, Tag minus) {
    QuotientPoly p(ring);
    Monomial a, b;
    a.set(i, plus);
    b.set(i, minus);
    p.add_term(a, 1);
    p.add_term(b, -1);
    return p;
  };

  std::vector<CharacterizationPolynomial> out;
  switch (which) {
    case Characterization::DDIFF: {
      for (int i = 0; i < n; ++i) {
        const Ring ring = Ring::i1(n).without(SubsetMask::singleton(i));
        const SetFunction d = partial(f, i);
        out.push_back({embed(d, Affine::x(), ring, i) - embed(d, Affine::y(), ring, i), t + 1});
      }
      return out;
    }
    case Characterization::G: {
      const Ring ring = Ring::i0(n);
      out.push_back({embed(f, Affine::x(), ring) + embed(f, Affine::y(), ring) - embed(f, sum, ring) -
                         embed(f, Affine::s(), ring),
                     t + 2});
      return out;
    }
    case Characterization::G1: {
      const Ring ring = Ring::i0(n);
      QuotientPoly p = embed(f, Affine::x(), ring) - embed(f, Affine::y(), ring);
      for (int i = 0; i < n; ++i) {
        const SetFunction d = partial(f, i);
        p = p + linear(ring, i, Tag::Y, Tag::S) * embed(d, Affine::x(), ring, i);
        p = p - linear(ring, i, Tag::X, Tag::S) * embed(d, sum, ring, i);
      }
      out.push_back({p, t + 2});
      return out;
    }
    case Characterization::G2: {
      const Ring ring = Ring::i0(n);
      QuotientPoly p = embed(f, Affine::y(), ring) - embed(f, Affine::x(), ring);
      for (int i = 0; i < n; ++i) {
        const SetFunction d = partial(f, i);
        p = p - linear(ring, i, Tag::Y, Tag::S) * embed(d, Affine::y(), ring, i);
        p = p + linear(ring, i, Tag::X, Tag::S) * embed(d, Affine::s(), ring, i);
      }
      out.push_back({p, t + 2});
      return out;
    }
    case Characterization::H1:
    case Characterization::H2: {
      const Ring ring = Ring::i1(n);
      const bool h1 = which == Characterization::H1;
      QuotientPoly p = h1 ? embed(f, Affine::x(), ring) - embed(f, Affine::y(), ring)
                          : embed(f, Affine::y(), ring) - embed(f, Affine::x(), ring);
      for (int i = 0; i < n; ++i) {
        const SetFunction d = partial(f, i);
        const QuotientPoly step = linear(ring, i, Tag::Y, Tag::X) * embed(d, h1 ? Affine::x() : Affine::y(), ring, i);
        p = h1 ? p + step : p - step;
      }
      out.push_back({p, t + 2});
      return out;
    }
  }
  throw std::invalid_argument("unknown characterization");
}

CharacterizationResult check_characterization(const SetFunction& f, Characterization which, int t,
                                              const ToleranceProfile& tol, int jobs) {
  if (t < 0) throw std::invalid_argument("t must be nonnegative");
  check_capacity(f.n(), 6, "check_characterization");
  const auto polys = characterization_polynomials(f, which, t);
  CharacterizationResult out;
  out.parts.resize(polys.size());
  parallel_for(polys.size(), jobs, [&](std::size_t k) {
    out.parts[k] = sos_feasibility_margin(polys[k].poly, polys[k].degree, tol);
  });
  std::vector<SosVerdict> verdicts;
  for (const auto& p : out.parts) verdicts.push_back(p.verdict);
  out.verdict = combine(verdicts);
  return out;
}

}  // namespace sossubmod
