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

#include "sossubmod/regression.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>

#include "sossubmod/families.hpp"
#include "sossubmod/parallel.hpp"
#include "sossubmod/rng.hpp"

namespace sossubmod {

namespace {

std::vector<std::uint32_t> coefficient_masks(int n, int k) {
  std::vector<std::uint32_t> masks;
  for (std::uint32_t t = 0; t <= SubsetMask::full(n).bits; ++t) {
    if (std::popcount(t) <= k) masks.push_back(t);
    if (n == 0) break;
  }
  return masks;
}

struct TrainingSystem {
  Eigen::MatrixXd X;  // rows: training points, cols: coefficients
  Eigen::VectorXd y;
};

TrainingSystem training_system(const Dataset& data, const std::vector<std::uint32_t>& masks) {
  std::vector<const DataRow*> train;
  for (const auto& r : data.rows) {
    if (r.split == Split::TRAIN) train.push_back(&r);
  }
  TrainingSystem s;
  s.X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(train.size()), static_cast<Eigen::Index>(masks.size()));
  s.y.resize(static_cast<Eigen::Index>(train.size()));
  for (std::size_t r = 0; r < train.size(); ++r) {
    s.y(r) = train[r]->label;
    for (std::size_t c = 0; c < masks.size(); ++c) {
      if ((masks[c] & ~train[r]->mask.bits) == 0) s.X(r, c) = 1.0;
    }
  }
  return s;
}

SetFunction to_setfunction(int n, const std::vector<std::uint32_t>& masks, const Eigen::VectorXd& a) {
  SetFunction::Terms terms;
  for (std::size_t c = 0; c < masks.size(); ++c) {
    if (a(c) != 0.0) terms[masks[c]] = rational_from_double(a(c));
  }
  return SetFunction(n, std::move(terms));
}

// Pairs {i, j} contained in T.
std::vector<std::uint32_t> pairs_within(std::uint32_t t) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t a = t; a; a &= a - 1) {
    for (std::uint32_t b = a & (a - 1); b; b &= b - 1) out.push_back((a & -a) | (b & -b));
  }
  return out;
}

Eigen::VectorXd solve_conic(const TrainingSystem& sys, const std::vector<std::uint32_t>& masks, const Dataset& data,
                            const FitOptions& opt, std::vector<PairGram>* grams, ConicSolution* solution) {
  const int N = static_cast<int>(masks.size());
  ConicProblem problem;
  problem.add_free(N);
  problem.quadratic = 2.0 * (sys.X.transpose() * sys.X);
  problem.quadratic.diagonal().array() += 2.0 * opt.lambda;
  const Eigen::VectorXd c = -2.0 * sys.X.transpose() * sys.y;
  for (int k = 0; k < N; ++k) problem.objective_free[k] = c(k);

  if (opt.method == RegressionMethod::TSOS) {
    std::vector<CoefficientVar> vars;
    for (int k = 0; k < N; ++k) {
      if (std::popcount(masks[k]) >= 2) vars.push_back({masks[k], k, 1.0});
    }
    *grams = add_tsos_submodularity(problem, data.n, opt.t, SetFunction(data.n), vars);
  } else {
    // a({i,j}) + sum_{T strictly containing {i,j}} max(0, a(T)) <= 0, with
    // w_T >= max(0, a(T)) through w_T - a(T) - p_T = 0 and w_T, p_T >= 0.
    std::map<std::uint32_t, ConstraintRow> pair_rows;
    for (int k = 0; k < N; ++k) {
      if (std::popcount(masks[k]) == 2) pair_rows[masks[k]].free_terms.push_back({k, 1.0});
    }
    for (int k = 0; k < N; ++k) {
      const std::uint32_t t = masks[k];
      if (std::popcount(t) < 3) continue;
      const int w = problem.add_nonneg(2);
      ConstraintRow bound;
      bound.nonneg_terms = {{w, 1.0}, {w + 1, -1.0}};
      bound.free_terms = {{k, -1.0}};
      problem.rows.push_back(std::move(bound));
      for (std::uint32_t pair : pairs_within(t)) pair_rows[pair].nonneg_terms.push_back({w, 1.0});
    }
    for (auto& [pair, row] : pair_rows) {
      row.nonneg_terms.push_back({problem.add_nonneg(1), 1.0});
      problem.rows.push_back(std::move(row));
    }
  }
  *solution = solve(problem, opt.tol);
  const bool usable = solution->status == SolveStatus::OPTIMAL ||
                      (solution->status == SolveStatus::NUMERICAL_TROUBLE && solution->primal_infeasibility <= 1e-6 &&
                       solution->dual_infeasibility <= 1e-6);
  if (!usable) {
    throw FitError(std::string("regression solve failed: ") + to_string(solution->status) + " " + solution->message);
  }
  Eigen::VectorXd a(N);
  for (int k = 0; k < N; ++k) a(k) = solution->free[k];
  return a;
}

double split_rmse(const std::vector<double>& values, const Dataset& data, Split split) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : data.rows) {
    if (r.split != split) continue;
    const double e = values[r.mask.bits] - r.label;
    sum += e * e;
    ++count;
  }
  return count ? std::sqrt(sum / static_cast<double>(count)) : 0.0;
}

double log_det_value(const std::vector<std::vector<double>>& z, std::uint32_t mask) {
  const int dim = static_cast<int>(z.front().size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim, dim);
  for (std::uint32_t b = mask; b; b &= b - 1) {
    const auto& v = z[std::countr_zero(b)];
    const Eigen::Map<const Eigen::VectorXd> zv(v.data(), dim);
    m += zv * zv.transpose();
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(m);
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace

const char* to_string(Split s) {
  switch (s) {
    case Split::TRAIN:
      return "train";
    case Split::VAL:
      return "val";
    case Split::TEST:
      return "test";
  }
  return "unknown";
}

Split split_from_string(const std::string& s) {
  if (s == "train") return Split::TRAIN;
  if (s == "val") return Split::VAL;
  if (s == "test") return Split::TEST;
  throw std::invalid_argument("unknown split '" + s + "'");
}

void Dataset::validate() const {
  if (n < 0 || n > kMaxEnumerationN) throw std::invalid_argument("dataset n out of range");
  for (const auto& r : rows) {
    if (!r.mask.subset_of(SubsetMask::full(n))) throw std::invalid_argument("dataset mask does not fit n");
    if (!std::isfinite(r.label)) throw std::invalid_argument("dataset label is not finite");
  }
}

std::size_t Dataset::count(Split s) const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [s](const DataRow& r) { return r.split == s; }));
}

const char* to_string(RegressionMethod m) {
  switch (m) {
    case RegressionMethod::POLY:
      return "poly";
    case RegressionMethod::TSOS:
      return "tsos";
    case RegressionMethod::NECESSARY:
      return "necessary";
  }
  return "unknown";
}

RegressionMethod method_from_string(const std::string& s) {
  if (s == "poly") return RegressionMethod::POLY;
  if (s == "tsos") return RegressionMethod::TSOS;
  if (s == "necessary") return RegressionMethod::NECESSARY;
  throw std::invalid_argument("unknown regression method '" + s + "'");
}

double rmse(const SetFunction& F, const Dataset& data, Split split) {
  return split_rmse(values_from_mle_d(F), data, split);
}

RegressionModel fit(const Dataset& data, const FitOptions& opt) {
  data.validate();
  if (opt.k < 0 || opt.k > data.n) throw std::invalid_argument("fit requires 0 <= k <= n");
  if (opt.lambda < 0) throw std::invalid_argument("lambda must be nonnegative");
  if (opt.method == RegressionMethod::TSOS) {
    if (opt.t < t_range(opt.k, data.n).t_min) throw std::invalid_argument("t below the range for degree k");
  }
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::uint32_t> masks = coefficient_masks(data.n, opt.k);
  const TrainingSystem sys = training_system(data, masks);

  RegressionModel model;
  model.method = opt.method;
  model.k = opt.k;
  model.t = opt.method == RegressionMethod::TSOS ? opt.t : 0;
  model.lambda = opt.lambda;
  if (static_cast<std::size_t>(sys.X.rows()) < masks.size()) {
    model.diagnostics += "fewer training rows than coefficients; ";
  }

  Eigen::VectorXd a;
  std::vector<PairGram> grams;
  ConicSolution solution;
  if (opt.method == RegressionMethod::POLY) {
    if (opt.lambda > 0) {
      Eigen::MatrixXd A = sys.X.transpose() * sys.X;
      A.diagonal().array() += opt.lambda;
      a = A.ldlt().solve(sys.X.transpose() * sys.y);
    } else {
      a = sys.X.completeOrthogonalDecomposition().solve(sys.y);
    }
  } else {
    a = solve_conic(sys, masks, data, opt, &grams, &solution);
  }

  SetFunction F = to_setfunction(data.n, masks, a);
  if (opt.method != RegressionMethod::POLY) {
    const double scale = 1.0 + (a.size() ? a.cwiseAbs().maxCoeff() : 0.0);
    F = repair_submodularity(F, opt.tol.verify_scale * scale, &model.repair_shift);
  }
  model.F = F;
  model.brute_force_submodular = brute_force_submodular(F).submodular;
  if (opt.method == RegressionMethod::TSOS) {
    model.certificate = report_from_solution(F, opt.t, grams, solution, opt.tol);
    if (!model.brute_force_submodular) throw FitError("t-sos fit is not submodular after re-verification");
    if (model.certificate->verdict != CertVerdict::CERTIFIED) {
      model.diagnostics += std::string("certificate re-verification ") + to_string(model.certificate->verdict) + "; ";
    }
  }
  model.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::vector<double> values = values_from_mle_d(F);
  model.rmse_train = split_rmse(values, data, Split::TRAIN);
  model.rmse_val = split_rmse(values, data, Split::VAL);
  model.rmse_test = split_rmse(values, data, Split::TEST);
  Eigen::VectorXd coeffs(static_cast<Eigen::Index>(masks.size()));
  for (std::size_t c = 0; c < masks.size(); ++c) coeffs(c) = F.coeff_d(SubsetMask(masks[c]));
  model.train_objective = (sys.y - sys.X * coeffs).squaredNorm() + opt.lambda * coeffs.squaredNorm();
  return model;
}

GridResult grid_search(const Dataset& data, RegressionMethod method, const std::vector<int>& ks,
                       const std::vector<int>& ts, const std::vector<double>& lambdas, const ToleranceProfile& tol,
                       int jobs) {
  if (ks.empty() || lambdas.empty() || (method == RegressionMethod::TSOS && ts.empty())) {
    throw std::invalid_argument("grid_search requires nonempty grids");
  }
  std::vector<int> k_sorted = ks;
  std::vector<int> t_sorted = method == RegressionMethod::TSOS ? ts : std::vector<int>{0};
  std::vector<double> l_sorted = lambdas;
  std::sort(k_sorted.begin(), k_sorted.end());
  std::sort(t_sorted.begin(), t_sorted.end());
  std::sort(l_sorted.begin(), l_sorted.end());
  GridResult out;
  for (int k : k_sorted) {
    for (int t : t_sorted) {
      if (method == RegressionMethod::TSOS) {
        const TRange r = t_range(k, data.n);
        if (t < r.t_min || t > r.t_max) continue;
      }
      for (double l : l_sorted) out.cells.push_back(GridCell{method, k, t, l, std::nullopt, {}});
    }
  }
  parallel_for(out.cells.size(), jobs, [&](std::size_t c) {
    GridCell& cell = out.cells[c];
    try {
      cell.model = fit(data, FitOptions{method, cell.k, cell.t, cell.lambda, tol});
    } catch (const FitError& e) {
      cell.error = e.what();
    }
  });
  for (std::size_t c = 0; c < out.cells.size(); ++c) {
    if (!out.cells[c].model) continue;
    if (!out.best || out.cells[c].model->rmse_val < out.cells[*out.best].model->rmse_val - 1e-12) out.best = c;
  }
  return out;
}

const char* to_string(SyntheticKind k) {
  switch (k) {
    case SyntheticKind::LOG:
      return "log";
    case SyntheticKind::LOGDET:
      return "logdet";
    case SyntheticKind::FACLOC:
      return "facloc";
  }
  return "unknown";
}

SyntheticKind synthetic_kind_from_string(const std::string& s) {
  if (s == "log") return SyntheticKind::LOG;
  if (s == "logdet") return SyntheticKind::LOGDET;
  if (s == "facloc") return SyntheticKind::FACLOC;
  throw std::invalid_argument("unknown synthetic kind '" + s + "'");
}

ValueTable synthetic_truth(SyntheticKind kind, int n, std::uint64_t seed) {
  if (n < 1 || n > 16) throw std::invalid_argument("synthetic data supports 1 <= n <= 16");
  auto z = random_features(n, 10, derive_seed(seed, 0));
  switch (kind) {
    case SyntheticKind::LOG:
      return build_values(family::SyntheticLog{std::move(z)});
    case SyntheticKind::FACLOC:
      return build_values(family::FacilityLocation{std::move(z)});
    case SyntheticKind::LOGDET: {
      std::vector<Rational> values(std::size_t{1} << n);
      for (std::uint32_t m = 0; m < values.size(); ++m) values[m] = rational_from_double(log_det_value(z, m));
      return ValueTable(n, std::move(values));
    }
  }
  throw std::invalid_argument("unknown synthetic kind");
}

Dataset make_synthetic(SyntheticKind kind, int n, int m, double sigma_noise, std::uint64_t seed) {
  if (m <= 0 || sigma_noise < 0) throw std::invalid_argument("make_synthetic requires m > 0 and sigma >= 0");
  const std::vector<double> truth = synthetic_truth(kind, n, seed).to_double();
  Rng sampler(derive_seed(seed, 1));
  Dataset data;
  data.n = n;
  data.rows.resize(m);
  const std::uint64_t full = SubsetMask::full(n).bits;
  for (auto& r : data.rows) {
    r.mask = SubsetMask(static_cast<std::uint32_t>(sampler.next() & full));
    r.label = truth[r.mask.bits];
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  sampler.shuffle(order, 0, order.size());
  const std::size_t n_train = static_cast<std::size_t>(m) / 2;
  const std::size_t n_val = static_cast<std::size_t>(m) / 4;
  for (std::size_t k = 0; k < order.size(); ++k) {
    data.rows[order[k]].split = k < n_train ? Split::TRAIN : (k < n_train + n_val ? Split::VAL : Split::TEST);
  }
  if (sigma_noise > 0) {
    double mean = 0.0;
    for (const auto& r : data.rows) mean += r.label;
    mean /= m;
    double var = 0.0;
    for (const auto& r : data.rows) var += (r.label - mean) * (r.label - mean);
    const double sd = std::sqrt(var / m) * sigma_noise;
    Rng noise(derive_seed(seed, 2));
    for (auto& r : data.rows) {
      if (r.split == Split::TRAIN) r.label += sd * noise.normal();
    }
  }
  return data;
}

}  // namespace sossubmod
