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

#include "sossubmod/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sossubmod {

int ConicProblem::add_block(int size) {
  if (size <= 0) throw std::invalid_argument("PSD block size must be positive");
  block_sizes.push_back(size);
  return static_cast<int>(block_sizes.size()) - 1;
}

int ConicProblem::add_nonneg(int count) {
  const int first = num_nonneg;
  num_nonneg += count;
  objective_nonneg.resize(num_nonneg, 0.0);
  return first;
}

int ConicProblem::add_free(int count) {
  const int first = num_free;
  num_free += count;
  objective_free.resize(num_free, 0.0);
  return first;
}

void ConicProblem::validate() const {
  auto check_matrix = [&](const MatrixTerm& t) {
    if (t.block < 0 || t.block >= static_cast<int>(block_sizes.size())) {
      throw std::invalid_argument("matrix term refers to an unknown block");
    }
    const int n = block_sizes[t.block];
    if (t.i < 0 || t.j < t.i || t.j >= n) throw std::invalid_argument("matrix term index out of range");
  };
  for (const auto& t : objective_matrix) check_matrix(t);
  if (static_cast<int>(objective_nonneg.size()) != num_nonneg ||
      static_cast<int>(objective_free.size()) != num_free) {
    throw std::invalid_argument("objective vector size mismatch");
  }
  if (quadratic.size() != 0 && (quadratic.rows() != num_free || quadratic.cols() != num_free)) {
    throw std::invalid_argument("quadratic term must be num_free x num_free");
  }
  for (const auto& r : rows) {
    for (const auto& t : r.matrix_terms) check_matrix(t);
    for (const auto& t : r.nonneg_terms) {
      if (t.index < 0 || t.index >= num_nonneg) throw std::invalid_argument("nonneg index out of range");
    }
    for (const auto& t : r.free_terms) {
      if (t.index < 0 || t.index >= num_free) throw std::invalid_argument("free index out of range");
    }
  }
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::OPTIMAL:
      return "OPTIMAL";
    case SolveStatus::INFEASIBLE:
      return "INFEASIBLE";
    case SolveStatus::UNBOUNDED:
      return "UNBOUNDED";
    case SolveStatus::NUMERICAL_TROUBLE:
      return "NUMERICAL_TROUBLE";
  }
  return "UNKNOWN";
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Entry {
  int a;
  int b;
  double v;
};

struct RowPart {
  int row;
  std::vector<Entry> entries;  // symmetric expansion
  std::vector<int> cols;       // distinct column indices among entries
  std::vector<int> slot;       // per entry, position of its column in cols
};

struct Component {
  std::vector<int> rows;
  MatrixXd M;
  Eigen::LDLT<MatrixXd> ldlt;
};

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

 private:
  std::vector<int> parent_;
};

MatrixXd sym(const MatrixXd& a) { return 0.5 * (a + a.transpose()); }

// Largest alpha with A + alpha dA PSD, given the Cholesky factor of A.
double max_step_psd(const Eigen::LLT<MatrixXd>& llt, const MatrixXd& d) {
  MatrixXd w = llt.matrixL().solve(d);
  w = llt.matrixL().solve(w.transpose().eval());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym(w), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  if (lmin >= 0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

double max_step_nonneg(const VectorXd& x, const VectorXd& dx) {
  double alpha = std::numeric_limits<double>::infinity();
  for (Eigen::Index l = 0; l < x.size(); ++l) {
    if (dx(l) < 0) alpha = std::min(alpha, -x(l) / dx(l));
  }
  return alpha;
}

class InteriorPoint {
 public:
  InteriorPoint(const ConicProblem& p, const ToleranceProfile& tol) : p_(p), tol_(tol) {
    p_.validate();
    nb_ = static_cast<int>(p.block_sizes.size());
    m_ = p.num_rows();
    nw_ = p.num_nonneg;
    nu_ = p.num_free;
    build_structure();
  }

  ConicSolution run();

 private:
  void build_structure();
  void initialize();
  void residuals();
  VectorXd apply_A(const std::vector<MatrixXd>& X, const VectorXd& w) const;
  void apply_AT(const VectorXd& y, std::vector<MatrixXd>& S, VectorXd& s) const;
  VectorXd apply_B(const VectorXd& u) const;
  VectorXd apply_BT(const VectorXd& y) const;
  bool factor();
  VectorXd solve_M(const VectorXd& r) const;
  VectorXd apply_M(const VectorXd& v) const;
  void solve_reduced(const VectorXd& r1, const VectorXd& ru, VectorXd& du, VectorXd& dy) const;
  void direction(const std::vector<MatrixXd>& G, const VectorXd& g, std::vector<MatrixXd>& dX,
                 VectorXd& dw, std::vector<MatrixXd>& dZ, VectorXd& dz, VectorXd& du, VectorXd& dy);
  void step_lengths(const std::vector<MatrixXd>& dX, const VectorXd& dw, const std::vector<MatrixXd>& dZ,
                    const VectorXd& dz, double& ap, double& ad);
  ConicSolution finish(SolveStatus status, const std::string& msg);
  void remember_best();
  ConicSolution finish_best(const std::string& msg);

  const ConicProblem& p_;
  ToleranceProfile tol_;
  int nb_ = 0;
  int m_ = 0;
  int nw_ = 0;
  int nu_ = 0;

  std::vector<std::vector<RowPart>> parts_;  // per block
  std::vector<std::vector<LinearTerm>> lp_cols_;  // per nonneg var: (row, coeff)
  std::vector<std::vector<LinearTerm>> free_cols_;
  std::vector<MatrixXd> C_;
  VectorXd cw_, cu_, b_;
  bool has_quadratic_ = false;
  std::vector<Component> comps_;
  std::vector<int> comp_of_row_, local_of_row_;
  double norm_b_ = 0, norm_c_ = 0;

  std::vector<MatrixXd> X_, Z_, Zinv_;
  std::vector<Eigen::LLT<MatrixXd>> xchol_, zchol_;
  VectorXd w_, z_, u_, y_;
  VectorXd rp_, rw_, ru_;
  std::vector<MatrixXd> Rd_;
  double pobj_ = 0, dobj_ = 0, pinf_ = 0, dinf_ = 0, gap_ = 0, mu_ = 0;
  int total_dim_ = 0;
  int iter_ = 0;

  Eigen::LDLT<MatrixXd> schur_free_;
  MatrixXd minv_b_;

  struct Snapshot {
    std::vector<MatrixXd> X;
    VectorXd w, u, y;
    double pobj = 0, dobj = 0, pinf = 0, dinf = 0, gap = 0;
    int iter = 0;
    double merit = std::numeric_limits<double>::infinity();
  };
  Snapshot best_;
};

void InteriorPoint::build_structure() {
  parts_.assign(nb_, {});
  lp_cols_.assign(nw_, {});
  free_cols_.assign(nu_, {});
  C_.clear();
  for (int k = 0; k < nb_; ++k) C_.push_back(MatrixXd::Zero(p_.block_sizes[k], p_.block_sizes[k]));
  for (const auto& t : p_.objective_matrix) {
    if (t.i == t.j) {
      C_[t.block](t.i, t.i) += t.value;
    } else {
      C_[t.block](t.i, t.j) += 0.5 * t.value;
      C_[t.block](t.j, t.i) += 0.5 * t.value;
    }
  }
  cw_ = Eigen::Map<const VectorXd>(p_.objective_nonneg.data(), nw_);
  cu_ = Eigen::Map<const VectorXd>(p_.objective_free.data(), nu_);
  has_quadratic_ = p_.quadratic.size() != 0 && p_.quadratic.norm() > 0;
  b_.resize(m_);

  UnionFind uf(m_ + nb_ + nw_);
  for (int r = 0; r < m_; ++r) {
    const auto& row = p_.rows[r];
    b_(r) = row.rhs;
    std::vector<int> blocks_seen;
    for (const auto& t : row.matrix_terms) {
      if (std::find(blocks_seen.begin(), blocks_seen.end(), t.block) == blocks_seen.end()) {
        blocks_seen.push_back(t.block);
        parts_[t.block].push_back(RowPart{r, {}, {}, {}});
      }
      RowPart* part = &parts_[t.block].back();  // rows are visited in order
      if (t.i == t.j) {
        part->entries.push_back({t.i, t.i, t.value});
      } else {
        part->entries.push_back({t.i, t.j, 0.5 * t.value});
        part->entries.push_back({t.j, t.i, 0.5 * t.value});
      }
      uf.unite(r, m_ + t.block);
    }
    for (const auto& t : row.nonneg_terms) {
      lp_cols_[t.index].push_back({r, t.value});
      uf.unite(r, m_ + nb_ + t.index);
    }
    for (const auto& t : row.free_terms) free_cols_[t.index].push_back({r, t.value});
  }
  for (auto& block_parts : parts_) {
    for (auto& part : block_parts) {
      for (const auto& e : part.entries) {
        auto it = std::find(part.cols.begin(), part.cols.end(), e.b);
        if (it == part.cols.end()) {
          part.slot.push_back(static_cast<int>(part.cols.size()));
          part.cols.push_back(e.b);
        } else {
          part.slot.push_back(static_cast<int>(it - part.cols.begin()));
        }
      }
    }
  }
  comp_of_row_.assign(m_, -1);
  local_of_row_.assign(m_, -1);
  std::vector<int> comp_of_root(m_ + nb_ + nw_, -1);
  for (int r = 0; r < m_; ++r) {
    const int root = uf.find(r);
    if (comp_of_root[root] < 0) {
      comp_of_root[root] = static_cast<int>(comps_.size());
      comps_.emplace_back();
    }
    Component& c = comps_[comp_of_root[root]];
    comp_of_row_[r] = comp_of_root[root];
    local_of_row_[r] = static_cast<int>(c.rows.size());
    c.rows.push_back(r);
  }

  norm_b_ = b_.norm();
  double c2 = cw_.squaredNorm() + cu_.squaredNorm();
  for (const auto& c : C_) c2 += c.squaredNorm();
  norm_c_ = std::sqrt(c2);
  total_dim_ = nw_;
  for (int k = 0; k < nb_; ++k) total_dim_ += p_.block_sizes[k];
}

void InteriorPoint::initialize() {
  X_.clear();
  Z_.clear();
  for (int k = 0; k < nb_; ++k) {
    const int n = p_.block_sizes[k];
    const double sn = std::sqrt(static_cast<double>(n));
    double xi = std::max(10.0, sn);
    double eta = std::max({10.0, sn, C_[k].norm()});
    for (const auto& part : parts_[k]) {
      double na = 0;
      for (const auto& e : part.entries) na += e.v * e.v;
      na = std::sqrt(na);
      xi = std::max(xi, sn * (1.0 + std::abs(b_(part.row))) / (1.0 + na));
      eta = std::max(eta, na);
    }
    X_.push_back(xi * MatrixXd::Identity(n, n));
    Z_.push_back(eta * MatrixXd::Identity(n, n));
  }
  w_ = VectorXd::Zero(nw_);
  z_ = VectorXd::Zero(nw_);
  for (int l = 0; l < nw_; ++l) {
    double xi = 10.0;
    double eta = std::max(10.0, std::abs(cw_(l)));
    for (const auto& t : lp_cols_[l]) {
      xi = std::max(xi, (1.0 + std::abs(b_(t.index))) / (1.0 + std::abs(t.value)));
      eta = std::max(eta, std::abs(t.value));
    }
    w_(l) = xi;
    z_(l) = eta;
  }
  u_ = VectorXd::Zero(nu_);
  y_ = VectorXd::Zero(m_);
}

VectorXd InteriorPoint::apply_A(const std::vector<MatrixXd>& X, const VectorXd& w) const {
  VectorXd out = VectorXd::Zero(m_);
  for (int k = 0; k < nb_; ++k) {
    for (const auto& part : parts_[k]) {
      double s = 0;
      for (const auto& e : part.entries) s += e.v * X[k](e.a, e.b);
      out(part.row) += s;
    }
  }
  for (int l = 0; l < nw_; ++l) {
    for (const auto& t : lp_cols_[l]) out(t.index) += t.value * w(l);
  }
  return out;
}

void InteriorPoint::apply_AT(const VectorXd& y, std::vector<MatrixXd>& S, VectorXd& s) const {
  S.resize(nb_);
  for (int k = 0; k < nb_; ++k) {
    S[k] = MatrixXd::Zero(p_.block_sizes[k], p_.block_sizes[k]);
    for (const auto& part : parts_[k]) {
      const double yr = y(part.row);
      for (const auto& e : part.entries) S[k](e.a, e.b) += e.v * yr;
    }
  }
  s = VectorXd::Zero(nw_);
  for (int l = 0; l < nw_; ++l) {
    for (const auto& t : lp_cols_[l]) s(l) += t.value * y(t.index);
  }
}

VectorXd InteriorPoint::apply_B(const VectorXd& u) const {
  VectorXd out = VectorXd::Zero(m_);
  for (int j = 0; j < nu_; ++j) {
    for (const auto& t : free_cols_[j]) out(t.index) += t.value * u(j);
  }
  return out;
}

VectorXd InteriorPoint::apply_BT(const VectorXd& y) const {
  VectorXd out = VectorXd::Zero(nu_);
  for (int j = 0; j < nu_; ++j) {
    for (const auto& t : free_cols_[j]) out(j) += t.value * y(t.index);
  }
  return out;
}

void InteriorPoint::residuals() {
  rp_ = b_ - apply_A(X_, w_) - apply_B(u_);
  std::vector<MatrixXd> S;
  VectorXd s;
  apply_AT(y_, S, s);
  Rd_.resize(nb_);
  double d2 = 0;
  double lin = cw_.dot(w_) + cu_.dot(u_);
  double comp = w_.dot(z_);
  for (int k = 0; k < nb_; ++k) {
    Rd_[k] = C_[k] - S[k] - Z_[k];
    d2 += Rd_[k].squaredNorm();
    lin += (C_[k].cwiseProduct(X_[k])).sum();
    comp += (X_[k].cwiseProduct(Z_[k])).sum();
  }
  rw_ = cw_ - s - z_;
  d2 += rw_.squaredNorm();
  ru_ = cu_ - apply_BT(y_);
  double quad = 0;
  if (has_quadratic_) {
    const VectorXd pu = p_.quadratic * u_;
    ru_ += pu;
    quad = 0.5 * u_.dot(pu);
  }
  d2 += ru_.squaredNorm();
  pobj_ = lin + quad;
  dobj_ = b_.dot(y_) - quad;
  pinf_ = rp_.norm() / (1.0 + norm_b_);
  dinf_ = std::sqrt(d2) / (1.0 + norm_c_);
  gap_ = std::abs(pobj_ - dobj_) / (1.0 + std::abs(pobj_) + std::abs(dobj_));
  mu_ = total_dim_ > 0 ? comp / total_dim_ : 0.0;
}

bool InteriorPoint::factor() {
  Zinv_.resize(nb_);
  xchol_.resize(nb_);
  zchol_.resize(nb_);
  for (int k = 0; k < nb_; ++k) {
    xchol_[k].compute(X_[k]);
    zchol_[k].compute(Z_[k]);
    if (xchol_[k].info() != Eigen::Success || zchol_[k].info() != Eigen::Success) return false;
    Zinv_[k] = zchol_[k].solve(MatrixXd::Identity(Z_[k].rows(), Z_[k].cols()));
    Zinv_[k] = sym(Zinv_[k]);
  }
  for (auto& c : comps_) c.M = MatrixXd::Zero(c.rows.size(), c.rows.size());
  for (int k = 0; k < nb_; ++k) {
    const int n = p_.block_sizes[k];
    for (const auto& q : parts_[k]) {
      MatrixXd U = MatrixXd::Zero(n, q.cols.size());
      for (std::size_t e = 0; e < q.entries.size(); ++e) {
        U.col(q.slot[e]) += q.entries[e].v * Zinv_[k].col(q.entries[e].a);
      }
      MatrixXd Xs(q.cols.size(), n);
      for (std::size_t c = 0; c < q.cols.size(); ++c) Xs.row(c) = X_[k].row(q.cols[c]);
      // V(b, a) = sum over q entries (c, d, v) of v Zinv(b, c) X(d, a)
      const MatrixXd V = U * Xs;
      Component& comp = comps_[comp_of_row_[q.row]];
      const int lq = local_of_row_[q.row];
      for (const auto& p : parts_[k]) {
        double s = 0;
        for (const auto& e : p.entries) s += e.v * V(e.b, e.a);
        comp.M(local_of_row_[p.row], lq) += s;
      }
    }
  }
  for (int l = 0; l < nw_; ++l) {
    const double ratio = w_(l) / z_(l);
    for (const auto& a : lp_cols_[l]) {
      Component& comp = comps_[comp_of_row_[a.index]];
      for (const auto& c : lp_cols_[l]) {
        comp.M(local_of_row_[a.index], local_of_row_[c.index]) += a.value * c.value * ratio;
      }
    }
  }
  for (auto& c : comps_) {
    c.M = sym(c.M);
    const double scale = c.M.diagonal().cwiseAbs().maxCoeff();
    double reg = scale > 0 ? 1e-14 * scale : 1e-10;
    for (Eigen::Index i = 0; i < c.M.rows(); ++i) {
      if (c.M(i, i) <= reg) c.M(i, i) = std::max(c.M(i, i), 0.0) + reg;
    }
    c.ldlt.compute(c.M);
    // Near convergence M can lose definiteness to rounding; retry with a growing shift.
    while (c.ldlt.info() != Eigen::Success && reg < 1e-8 * scale) {
      c.M.diagonal().array() += 99.0 * reg;
      reg *= 100.0;
      c.ldlt.compute(c.M);
    }
    if (c.ldlt.info() != Eigen::Success) return false;
  }
  if (nu_ > 0) {
    minv_b_.resize(m_, nu_);
    for (int j = 0; j < nu_; ++j) {
      VectorXd col = VectorXd::Zero(m_);
      for (const auto& t : free_cols_[j]) col(t.index) += t.value;
      minv_b_.col(j) = solve_M(col);
    }
    MatrixXd S = MatrixXd::Zero(nu_, nu_);
    for (int j = 0; j < nu_; ++j) {
      for (int i = 0; i < nu_; ++i) {
        double s = 0;
        for (const auto& t : free_cols_[i]) s += t.value * minv_b_(t.index, j);
        S(i, j) = s;
      }
    }
    if (has_quadratic_) S += p_.quadratic;
    S = sym(S);
    const double scale = S.diagonal().cwiseAbs().maxCoeff();
    S.diagonal().array() += (scale > 0 ? 1e-14 * scale : 1e-12);
    schur_free_.compute(S);
    if (schur_free_.info() != Eigen::Success) return false;
  }
  return true;
}

VectorXd InteriorPoint::solve_M(const VectorXd& r) const {
  VectorXd out(m_);
  for (const auto& c : comps_) {
    VectorXd local(c.rows.size());
    for (std::size_t i = 0; i < c.rows.size(); ++i) local(i) = r(c.rows[i]);
    const VectorXd sol = c.ldlt.solve(local);
    for (std::size_t i = 0; i < c.rows.size(); ++i) out(c.rows[i]) = sol(i);
  }
  return out;
}

VectorXd InteriorPoint::apply_M(const VectorXd& v) const {
  VectorXd out(m_);
  for (const auto& c : comps_) {
    VectorXd local(c.rows.size());
    for (std::size_t i = 0; i < c.rows.size(); ++i) local(i) = v(c.rows[i]);
    const VectorXd prod = c.M * local;
    for (std::size_t i = 0; i < c.rows.size(); ++i) out(c.rows[i]) = prod(i);
  }
  return out;
}

// M dy + B du = r1, B^T dy - P du = ru.
void InteriorPoint::solve_reduced(const VectorXd& r1, const VectorXd& ru, VectorXd& du, VectorXd& dy) const {
  const VectorXd minv_r1 = solve_M(r1);
  VectorXd rhs = VectorXd::Zero(nu_);
  for (int i = 0; i < nu_; ++i) {
    for (const auto& t : free_cols_[i]) rhs(i) += t.value * minv_r1(t.index);
  }
  rhs -= ru;
  du = schur_free_.solve(rhs);
  dy = minv_r1 - minv_b_ * du;
}

void InteriorPoint::direction(const std::vector<MatrixXd>& G, const VectorXd& g, std::vector<MatrixXd>& dX,
                              VectorXd& dw, std::vector<MatrixXd>& dZ, VectorXd& dz, VectorXd& du,
                              VectorXd& dy) {
  std::vector<MatrixXd> T(nb_);
  for (int k = 0; k < nb_; ++k) T[k] = G[k] - sym(X_[k] * Rd_[k] * Zinv_[k]);
  const VectorXd ratio = w_.cwiseQuotient(z_);
  const VectorXd tw = g - ratio.cwiseProduct(rw_);
  const VectorXd r1 = rp_ - apply_A(T, tw);
  if (nu_ > 0) {
    solve_reduced(r1, ru_, du, dy);
    // Iterative refinement; the eliminated system loses accuracy as M degenerates.
    for (int pass = 0; pass < 2; ++pass) {
      VectorXd e1 = r1 - apply_M(dy) - apply_B(du);
      VectorXd e2 = ru_ - apply_BT(dy);
      if (has_quadratic_) e2 += p_.quadratic * du;
      VectorXd ddu, ddy;
      solve_reduced(e1, e2, ddu, ddy);
      du += ddu;
      dy += ddy;
    }
  } else {
    du = VectorXd::Zero(0);
    dy = solve_M(r1);
  }
  std::vector<MatrixXd> S;
  VectorXd s;
  apply_AT(dy, S, s);
  dZ.resize(nb_);
  dX.resize(nb_);
  for (int k = 0; k < nb_; ++k) {
    dZ[k] = Rd_[k] - S[k];
    dX[k] = G[k] - sym(X_[k] * dZ[k] * Zinv_[k]);
  }
  dz = rw_ - s;
  dw = g - ratio.cwiseProduct(dz);
}

void InteriorPoint::step_lengths(const std::vector<MatrixXd>& dX, const VectorXd& dw,
                                 const std::vector<MatrixXd>& dZ, const VectorXd& dz, double& ap,
                                 double& ad) {
  ap = max_step_nonneg(w_, dw);
  ad = max_step_nonneg(z_, dz);
  for (int k = 0; k < nb_; ++k) {
    ap = std::min(ap, max_step_psd(xchol_[k], dX[k]));
    ad = std::min(ad, max_step_psd(zchol_[k], dZ[k]));
  }
}

ConicSolution InteriorPoint::finish(SolveStatus status, const std::string& msg) {
  ConicSolution s;
  s.status = status;
  s.X = X_;
  s.nonneg.assign(w_.data(), w_.data() + nw_);
  s.free.assign(u_.data(), u_.data() + nu_);
  s.y.assign(y_.data(), y_.data() + m_);
  s.primal_objective = pobj_;
  s.dual_objective = dobj_;
  s.primal_infeasibility = pinf_;
  s.dual_infeasibility = dinf_;
  s.relative_gap = gap_;
  s.iterations = iter_;
  s.message = msg;
  return s;
}

void InteriorPoint::remember_best() {
  const double merit = std::max({pinf_, dinf_, gap_});
  if (!(merit < best_.merit)) return;
  best_ = Snapshot{X_, w_, u_, y_, pobj_, dobj_, pinf_, dinf_, gap_, iter_, merit};
}

// Late iterations can lose accuracy once the scaling matrices degenerate, so
// failures report the most accurate iterate seen.
ConicSolution InteriorPoint::finish_best(const std::string& msg) {
  if (best_.merit < std::max({pinf_, dinf_, gap_})) {
    X_ = best_.X;
    w_ = best_.w;
    u_ = best_.u;
    y_ = best_.y;
    pobj_ = best_.pobj;
    dobj_ = best_.dobj;
    pinf_ = best_.pinf;
    dinf_ = best_.dinf;
    gap_ = best_.gap;
    iter_ = best_.iter;
  }
  return finish(SolveStatus::NUMERICAL_TROUBLE, msg);
}

ConicSolution InteriorPoint::run() {
  initialize();
  double prev_pinf = std::numeric_limits<double>::infinity();
  int stall = 0;
  for (iter_ = 0; iter_ <= tol_.max_iterations; ++iter_) {
    residuals();
    if (pinf_ <= tol_.eq_abs && dinf_ <= tol_.eq_abs && gap_ <= tol_.gap_rel) {
      return finish(SolveStatus::OPTIMAL, "converged");
    }
    remember_best();
    // Stop once accuracy has clearly degraded from a near-optimal iterate.
    if (best_.merit <= 1e-6 && std::max({pinf_, dinf_, gap_}) > 1e3 * best_.merit) {
      return finish_best("accuracy lost near optimum");
    }
    // Farkas-type certificates from the current iterate.
    if (!has_quadratic_) {
      const double by = b_.dot(y_);
      if (by > 0) {
        std::vector<MatrixXd> S;
        VectorXd s;
        apply_AT(y_, S, s);
        double r2 = (s + z_).squaredNorm() + apply_BT(y_).squaredNorm();
        for (int k = 0; k < nb_; ++k) r2 += (S[k] + Z_[k]).squaredNorm();
        if (std::sqrt(r2) <= 1e-8 * by && by > 1e3 * (1.0 + norm_c_)) {
          return finish(SolveStatus::INFEASIBLE, "primal infeasibility certificate");
        }
      }
      double lin = cw_.dot(w_) + cu_.dot(u_);
      for (int k = 0; k < nb_; ++k) lin += (C_[k].cwiseProduct(X_[k])).sum();
      if (lin < 0) {
        const double ax = (apply_A(X_, w_) + apply_B(u_)).norm();
        if (ax <= 1e-8 * -lin && -lin > 1e3 * (1.0 + norm_b_)) {
          return finish(SolveStatus::UNBOUNDED, "dual infeasibility certificate");
        }
      }
    }
    if (iter_ == tol_.max_iterations) break;
    if (!factor()) return finish_best("factorization failed");

    std::vector<MatrixXd> G(nb_), dX, dZ;
    VectorXd dw, dz, du, dy;
    for (int k = 0; k < nb_; ++k) G[k] = -X_[k];
    VectorXd g = -w_;
    direction(G, g, dX, dw, dZ, dz, du, dy);
    double ap = 0, ad = 0;
    step_lengths(dX, dw, dZ, dz, ap, ad);
    if (has_quadratic_) ap = ad = std::min(ap, ad);
    const double apa = std::min(1.0, ap);
    const double ada = std::min(1.0, ad);
    double comp_aff = (w_ + apa * dw).dot(z_ + ada * dz);
    for (int k = 0; k < nb_; ++k) {
      comp_aff += ((X_[k] + apa * dX[k]).cwiseProduct(Z_[k] + ada * dZ[k])).sum();
    }
    const double mu_aff = total_dim_ > 0 ? comp_aff / total_dim_ : 0.0;
    double sigma = mu_ > 0 ? std::pow(std::max(0.0, mu_aff) / mu_, 3) : 0.0;
    sigma = std::clamp(sigma, 0.0, 1.0);

    for (int k = 0; k < nb_; ++k) {
      G[k] = sigma * mu_ * Zinv_[k] - X_[k] - sym(dX[k] * dZ[k] * Zinv_[k]);
    }
    g = (sigma * mu_) * z_.cwiseInverse() - w_ - dw.cwiseProduct(dz).cwiseQuotient(z_);
    direction(G, g, dX, dw, dZ, dz, du, dy);
    step_lengths(dX, dw, dZ, dz, ap, ad);
    if (has_quadratic_) ap = ad = std::min(ap, ad);
    const double frac = 0.9 + 0.09 * std::min({1.0, apa, ada});
    ap = std::min(1.0, frac * ap);
    ad = std::min(1.0, frac * ad);

    for (int k = 0; k < nb_; ++k) {
      X_[k] = sym(X_[k] + ap * dX[k]);
      Z_[k] = sym(Z_[k] + ad * dZ[k]);
    }
    w_ += ap * dw;
    z_ += ad * dz;
    if (nu_ > 0) u_ += ap * du;
    y_ += ad * dy;

    if (ap < 1e-10 && ad < 1e-10) {
      residuals();
      return finish_best("step length collapsed");
    }
    if (pinf_ >= 0.999 * prev_pinf && mu_ < 1e-14 * (1.0 + std::abs(pobj_))) {
      if (++stall > 5) break;
    } else {
      stall = 0;
    }
    prev_pinf = pinf_;
  }
  residuals();
  return finish_best("iteration limit reached");
}

}  // namespace

ConicSolution solve(const ConicProblem& problem, const ToleranceProfile& tol) {
  InteriorPoint ipm(problem, tol);
  return ipm.run();
}

}  // namespace sossubmod
