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
#include <stdexcept>
#include <string>
#include <vector>

#include "sossubmod/certify.hpp"
#include "sossubmod/setfn.hpp"
#include "sossubmod/solver.hpp"

namespace sossubmod {

enum class Split { TRAIN, VAL, TEST };

const char* to_string(Split s);
Split split_from_string(const std::string& s);

struct DataRow {
  SubsetMask mask;
  double label = 0.0;
  Split split = Split::TRAIN;
};

struct Dataset {
  int n = 0;
  std::vector<DataRow> rows;

  // Throws std::invalid_argument when a mask does not fit n.
  void validate() const;
  std::size_t count(Split s) const;
};

enum class RegressionMethod { POLY, TSOS, NECESSARY };

const char* to_string(RegressionMethod m);
RegressionMethod method_from_string(const std::string& s);

struct FitOptions {
  RegressionMethod method = RegressionMethod::POLY;
  int k = 2;
  int t = 0;  // TSOS only
  double lambda = 0.0;
  ToleranceProfile tol;
};

struct RegressionModel {
  RegressionMethod method = RegressionMethod::POLY;
  int k = 0;
  int t = 0;
  double lambda = 0.0;
  SetFunction F;
  double rmse_train = 0.0;
  double rmse_val = 0.0;
  double rmse_test = 0.0;
  double train_objective = 0.0;  // sum of squared train residuals + ridge term
  double solve_seconds = 0.0;
  double repair_shift = 0.0;  // submodularity clean-up applied after the solve
  bool brute_force_submodular = false;
  std::optional<SubmodCertReport> certificate;  // TSOS only
  std::string diagnostics;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

RegressionModel fit(const Dataset& data, const FitOptions& options);

// Root mean squared error of F on the rows of one split (0 when the split is empty).
double rmse(const SetFunction& F, const Dataset& data, Split split);

struct GridCell {
  RegressionMethod method = RegressionMethod::POLY;
  int k = 0;
  int t = 0;
  double lambda = 0.0;
  std::optional<RegressionModel> model;
  std::string error;
};

struct GridResult {
  std::vector<GridCell> cells;  // in (k, t, lambda) order
  std::optional<std::size_t> best;
};

inline const std::vector<double> kDefaultLambdaGrid = {0.0, 1e-4, 1e-3, 1e-2};

// Best cell by validation RMSE; ties go to the smaller (k, t, lambda).
GridResult grid_search(const Dataset& data, RegressionMethod method, const std::vector<int>& ks,
                       const std::vector<int>& ts, const std::vector<double>& lambdas,
                       const ToleranceProfile& tol = {}, int jobs = 1);

enum class SyntheticKind { LOG, LOGDET, FACLOC };

const char* to_string(SyntheticKind k);
SyntheticKind synthetic_kind_from_string(const std::string& s);

// Noiseless ground-truth values on all subsets.
ValueTable synthetic_truth(SyntheticKind kind, int n, std::uint64_t seed);

// Samples m subsets uniformly, splits 50/25/25 and adds Gaussian noise with
// standard deviation sigma_noise * std(noiseless labels) to training labels.
Dataset make_synthetic(SyntheticKind kind, int n, int m, double sigma_noise, std::uint64_t seed);

}  // namespace sossubmod
