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

#include <optional>
#include <string>
#include <vector>

#include "sossubmod/setfn.hpp"
#include "sossubmod/sos.hpp"

namespace sossubmod {

struct TRange {
  int t_min = 0;
  int t_max = 0;
};

// t_min = ceil((d-2)/2), t_max = ceil((n+d-5)/2), both clamped at 0.
TRange t_range(int d, int n);

enum class CertVerdict { CERTIFIED, NOT_SOS, INDETERMINATE };

const char* to_string(CertVerdict v);

struct PairResult {
  int i = 0;
  int j = 0;
  SosResult sos;
};

struct SubmodCertReport {
  int n = 0;
  int t = 0;
  CertVerdict verdict = CertVerdict::CERTIFIED;
  std::vector<PairResult> pairs;
};

// -d2F/dx_i dx_j as an element of I2 over the indices other than i and j.
QuotientPoly pair_target(const SetFunction& f, int i, int j);

/// Coefficient a(mask) of a set function given as sign * free variable.
struct CoefficientVar {
  std::uint32_t mask = 0;
  int free_index = 0;
  double sign = 1.0;
};

struct PairGram {
  int i = 0;
  int j = 0;
  GramBlock gram;
};

// Adds Gram blocks and coefficient-matching rows forcing base + sum sign*u*x^mask
// to be t-sos-submodular. Rows for unreachable monomials pin the involved
// coefficients.
std::vector<PairGram> add_tsos_submodularity(ConicProblem& problem, int n, int t, const SetFunction& base,
                                             const std::vector<CoefficientVar>& vars);

// Builds a report from Gram blocks of a solved problem, re-verifying each pair
// against the exact function f.
SubmodCertReport report_from_solution(const SetFunction& f, int t, const std::vector<PairGram>& grams,
                                      const ConicSolution& sol, const ToleranceProfile& tol);

SubmodCertReport is_t_sos_submodular(const SetFunction& f, int t, const ToleranceProfile& tol = {},
                                     int jobs = 1);

enum class MinimalTStatus { FOUND, NOT_SUBMODULAR, CERT_GAP };

const char* to_string(MinimalTStatus s);

struct MinimalTResult {
  MinimalTStatus status = MinimalTStatus::CERT_GAP;
  int t = -1;
  TRange range;
  bool modular = false;
  std::optional<SubmodularityWitness> witness;
  std::vector<SubmodCertReport> reports;  // one per scanned level
  std::string diagnostics;
};

MinimalTResult minimal_t(const SetFunction& f, const ToleranceProfile& tol = {}, int jobs = 1);

enum class Characterization { G, DDIFF, G1, H1, H2, G2 };

const char* to_string(Characterization c);
Characterization characterization_from_string(const std::string& s);

struct CharacterizationPolynomial {
  QuotientPoly poly;
  int degree = 0;  // sos degree to test at
};

// The polynomials of a characterization at level t (n of them for DDIFF, one otherwise).
std::vector<CharacterizationPolynomial> characterization_polynomials(const SetFunction& f, Characterization which,
                                                                    int t);

struct CharacterizationResult {
  CertVerdict verdict = CertVerdict::CERTIFIED;
  std::vector<SosResult> parts;
};

CharacterizationResult check_characterization(const SetFunction& f, Characterization which, int t,
                                              const ToleranceProfile& tol = {}, int jobs = 1);

}  // namespace sossubmod
