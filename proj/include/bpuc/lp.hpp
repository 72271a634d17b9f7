// Copyright 2026 The BPUC Authors
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

// A dense-tableau, bounded-variable primal simplex for the desk-scale LPs of
// this library (assignment-model relaxation, arc-flow relaxation, and the
// restricted master of column generation).
//
// Phase 1 starts from one artificial column per row, signed so that the
// artificial basis is feasible. The artificial columns stay in the tableau
// through phase 2 (fixed at zero), which keeps B^-1 available for reading
// the row duals off their reduced costs.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bpuc/instance.hpp"

namespace bpuc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct LpVariable {
  double lower = 0.0;
  double upper = kInfinity;
  double cost = 0.0;
};

struct LpRow {
  std::vector<std::pair<int, double>> coeffs;
  Relation relation = Relation::kEqual;
  double rhs = 0.0;
};

/// Minimisation LP over bounded variables.
class LinearProgram {
 public:
  int add_variable(double lower, double upper, double cost) {
    if (!(lower <= upper)) throw std::invalid_argument("variable lower bound exceeds upper bound");
    if (!std::isfinite(cost)) throw std::invalid_argument("objective coefficient must be finite");
    vars_.push_back({lower, upper, cost});
    return static_cast<int>(vars_.size()) - 1;
  }

  int add_row(std::vector<std::pair<int, double>> coeffs, Relation rel, double rhs) {
    for (const auto& [j, a] : coeffs) {
      if (j < 0 || j >= num_variables()) throw std::out_of_range("row references unknown variable");
      if (!std::isfinite(a)) throw std::invalid_argument("row coefficient must be finite");
    }
    if (!std::isfinite(rhs)) throw std::invalid_argument("right-hand side must be finite");
    rows_.push_back({std::move(coeffs), rel, rhs});
    return static_cast<int>(rows_.size()) - 1;
  }

  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<LpVariable>& variables() const { return vars_; }
  const std::vector<LpRow>& rows() const { return rows_; }
  const LpVariable& variable(int j) const { return vars_[static_cast<std::size_t>(j)]; }
  const LpRow& row(int i) const { return rows_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<LpVariable> vars_;
  std::vector<LpRow> rows_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kNumerical };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "OPTIMAL";
    case LpStatus::kInfeasible: return "INFEASIBLE";
    case LpStatus::kUnbounded: return "UNBOUNDED";
    case LpStatus::kNumerical: return "NUMERICAL";
  }
  return "NUMERICAL";
}

struct LpResult {
  LpStatus status = LpStatus::kNumerical;
  double objective = 0.0;
  std::vector<double> primal;
  std::vector<double> dual;  // one per row; d_j = c_j - sum_i a_ij y_i
  int iterations = 0;
};

/// One solve at a time per object; the tableau is reused between calls.
class SimplexSolver {
 public:
  static constexpr double kPrimalTol = 1e-9;
  static constexpr double kDualTol = 1e-9;
  static constexpr double kPivotTol = 1e-9;
  static constexpr double kCheckTol = 1e-7;

  LpResult solve(const LinearProgram& lp) {
    setup(lp);
    LpResult res;
    // Phase 1: minimise the sum of artificials.
    for (int j = 0; j < cols_; ++j) cost_[ju(j)] = j >= art_begin_ ? 1.0 : 0.0;
    LpStatus st = run(res.iterations);
    if (st == LpStatus::kNumerical) return finish(lp, LpStatus::kNumerical, res);
    double infeas = 0.0;
    for (int j = art_begin_; j < cols_; ++j) infeas += x_[ju(j)];
    if (infeas > kCheckTol * (1.0 + rhs_scale_)) return finish(lp, LpStatus::kInfeasible, res);
    drive_out_artificials();
    for (int j = art_begin_; j < cols_; ++j) {
      lower_[ju(j)] = 0.0;
      upper_[ju(j)] = 0.0;
      if (!basic_[ju(j)]) x_[ju(j)] = 0.0;
    }
    // Phase 2.
    for (int j = 0; j < cols_; ++j) cost_[ju(j)] = j < nstruct_ ? lp.variable(j).cost : 0.0;
    st = run(res.iterations);
    return finish(lp, st, res);
  }

 private:
  static std::size_t ju(int j) { return static_cast<std::size_t>(j); }
  double& t(int r, int c) { return tab_[static_cast<std::size_t>(r) * ju(cols_) + ju(c)]; }

  void setup(const LinearProgram& lp) {
    rows_ = lp.num_rows();
    nstruct_ = lp.num_variables();
    int nslack = 0;
    for (const auto& row : lp.rows())
      if (row.relation != Relation::kEqual) ++nslack;
    art_begin_ = nstruct_ + nslack;
    cols_ = art_begin_ + rows_;
    tab_.assign(static_cast<std::size_t>(rows_) * ju(cols_), 0.0);
    lower_.assign(ju(cols_), 0.0);
    upper_.assign(ju(cols_), kInfinity);
    x_.assign(ju(cols_), 0.0);
    cost_.assign(ju(cols_), 0.0);
    d_.assign(ju(cols_), 0.0);
    basic_.assign(ju(cols_), 0);
    basis_.assign(static_cast<std::size_t>(rows_), -1);
    art_sign_.assign(static_cast<std::size_t>(rows_), 1.0);
    rhs_scale_ = 0.0;

    for (int j = 0; j < nstruct_; ++j) {
      const LpVariable& v = lp.variable(j);
      lower_[ju(j)] = v.lower;
      upper_[ju(j)] = v.upper;
      if (std::isfinite(v.lower))
        x_[ju(j)] = v.lower;
      else if (std::isfinite(v.upper))
        x_[ju(j)] = v.upper;
      else
        x_[ju(j)] = 0.0;
    }
    int slack = nstruct_;
    for (int i = 0; i < rows_; ++i) {
      const LpRow& row = lp.row(i);
      for (const auto& [j, a] : row.coeffs) t(i, j) += a;
      if (row.relation == Relation::kLessEqual) t(i, slack++) = 1.0;
      if (row.relation == Relation::kGreaterEqual) t(i, slack++) = -1.0;
      double residual = row.rhs;
      for (int j = 0; j < art_begin_; ++j) residual -= t(i, j) * x_[ju(j)];
      const double s = residual >= 0 ? 1.0 : -1.0;
      art_sign_[static_cast<std::size_t>(i)] = s;
      // Row i of B^-1 A with B = diag(s).
      for (int j = 0; j < art_begin_; ++j) t(i, j) *= s;
      t(i, art_begin_ + i) = 1.0;
      const int a = art_begin_ + i;
      x_[ju(a)] = std::fabs(residual);
      basic_[ju(a)] = 1;
      basis_[static_cast<std::size_t>(i)] = a;
      rhs_scale_ = std::max(rhs_scale_, std::fabs(row.rhs));
    }
  }

  void compute_reduced_costs() {
    for (int j = 0; j < cols_; ++j) d_[ju(j)] = cost_[ju(j)];
    for (int r = 0; r < rows_; ++r) {
      const double cb = cost_[ju(basis_[static_cast<std::size_t>(r)])];
      if (cb == 0.0) continue;
      const double* row = &tab_[static_cast<std::size_t>(r) * ju(cols_)];
      for (int j = 0; j < cols_; ++j) d_[ju(j)] -= cb * row[j];
    }
    for (int r = 0; r < rows_; ++r) d_[ju(basis_[static_cast<std::size_t>(r)])] = 0.0;
  }

  void pivot(int pr, int pc) {
    double* prow = &tab_[static_cast<std::size_t>(pr) * ju(cols_)];
    const double inv = 1.0 / prow[pc];
    for (int j = 0; j < cols_; ++j) prow[j] *= inv;
    prow[pc] = 1.0;
    for (int r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      double* row = &tab_[static_cast<std::size_t>(r) * ju(cols_)];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (int j = 0; j < cols_; ++j)
        if (prow[j] != 0.0) row[j] -= f * prow[j];
      row[pc] = 0.0;
    }
    const double f = d_[ju(pc)];
    if (f != 0.0)
      for (int j = 0; j < cols_; ++j)
        if (prow[j] != 0.0) d_[ju(j)] -= f * prow[j];
    d_[ju(pc)] = 0.0;
    const int leaving = basis_[static_cast<std::size_t>(pr)];
    basic_[ju(leaving)] = 0;
    basic_[ju(pc)] = 1;
    basis_[static_cast<std::size_t>(pr)] = pc;
  }

  LpStatus run(int& iterations) {
    compute_reduced_costs();
    const int degenerate_limit = 10 * (rows_ + cols_);
    const int max_iter = 50 * (rows_ + cols_) + 1000;
    int degenerate_run = 0;
    bool bland = false;
    for (int it = 0;; ++it) {
      if (it > max_iter) return LpStatus::kNumerical;
      if (it % 64 == 63) compute_reduced_costs();
      // Entering column.
      int enter = -1;
      double best = 0.0;
      double dir = 0.0;
      for (int j = 0; j < cols_; ++j) {
        if (basic_[ju(j)]) continue;
        const double lo = lower_[ju(j)], up = upper_[ju(j)];
        if (lo == up) continue;
        const double dj = d_[ju(j)];
        double cand_dir = 0.0;
        if (dj < -kDualTol && x_[ju(j)] < up - kPrimalTol) cand_dir = 1.0;
        else if (dj > kDualTol && x_[ju(j)] > lo + kPrimalTol) cand_dir = -1.0;
        if (cand_dir == 0.0) continue;
        if (bland) {
          enter = j;
          dir = cand_dir;
          break;
        }
        if (std::fabs(dj) > best) {
          best = std::fabs(dj);
          enter = j;
          dir = cand_dir;
        }
      }
      if (enter < 0) return LpStatus::kOptimal;

      // Ratio test.
      double theta = upper_[ju(enter)] - lower_[ju(enter)];
      int leave_row = -1;
      double leave_alpha = 0.0;
      for (int r = 0; r < rows_; ++r) {
        const double a = t(r, enter) * dir;
        if (std::fabs(a) <= kPivotTol) continue;
        const int b = basis_[static_cast<std::size_t>(r)];
        double limit;
        if (a > 0) {
          if (!std::isfinite(lower_[ju(b)])) continue;
          limit = (x_[ju(b)] - lower_[ju(b)]) / a;
        } else {
          if (!std::isfinite(upper_[ju(b)])) continue;
          limit = (upper_[ju(b)] - x_[ju(b)]) / -a;
        }
        if (limit < 0) limit = 0;
        bool take;
        if (leave_row < 0)
          take = limit <= theta;
        else if (limit < theta - 1e-12)
          take = true;
        else if (limit <= theta + 1e-12)
          take = bland ? b < basis_[static_cast<std::size_t>(leave_row)]
                       : std::fabs(a) > std::fabs(leave_alpha);
        else
          take = false;
        if (take) {
          theta = std::min(theta, limit);
          leave_row = r;
          leave_alpha = a;
        }
      }
      if (!std::isfinite(theta)) return LpStatus::kUnbounded;
      ++iterations;

      // Move.
      if (theta > 0) {
        x_[ju(enter)] += dir * theta;
        for (int r = 0; r < rows_; ++r) {
          const double a = t(r, enter);
          if (a != 0.0) x_[ju(basis_[static_cast<std::size_t>(r)])] -= a * dir * theta;
        }
      }
      if (theta <= 1e-12) {
        if (++degenerate_run > degenerate_limit) bland = true;
      } else {
        degenerate_run = 0;
      }
      if (leave_row < 0) {
        x_[ju(enter)] = dir > 0 ? upper_[ju(enter)] : lower_[ju(enter)];
        continue;
      }
      const int leaving = basis_[static_cast<std::size_t>(leave_row)];
      x_[ju(leaving)] = leave_alpha > 0 ? lower_[ju(leaving)] : upper_[ju(leaving)];
      pivot(leave_row, enter);
    }
  }

  void drive_out_artificials() {
    for (int r = 0; r < rows_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] < art_begin_) continue;
      int best = -1;
      double best_abs = 1e-7;
      for (int j = 0; j < art_begin_; ++j) {
        if (basic_[ju(j)]) continue;
        if (std::fabs(t(r, j)) > best_abs) {
          best_abs = std::fabs(t(r, j));
          best = j;
        }
      }
      if (best < 0) continue;  // redundant row
      x_[ju(basis_[static_cast<std::size_t>(r)])] = 0.0;
      pivot(r, best);
    }
  }

  // Recompute basic values from the nonbasic ones through B^-1, which sits
  // in the artificial columns scaled by their signs.
  void refresh_basic_values(const LinearProgram& lp) {
    std::vector<double> resid(static_cast<std::size_t>(rows_));
    int slack = nstruct_;
    for (int i = 0; i < rows_; ++i) {
      const LpRow& row = lp.row(i);
      double v = row.rhs;
      for (const auto& [j, a] : row.coeffs)
        if (!basic_[ju(j)]) v -= a * x_[ju(j)];
      if (row.relation != Relation::kEqual) {
        const double sc = row.relation == Relation::kLessEqual ? 1.0 : -1.0;
        if (!basic_[ju(slack)]) v -= sc * x_[ju(slack)];
        ++slack;
      }
      resid[static_cast<std::size_t>(i)] = v;
    }
    for (int r = 0; r < rows_; ++r) {
      double v = 0.0;
      for (int i = 0; i < rows_; ++i)
        v += t(r, art_begin_ + i) * art_sign_[static_cast<std::size_t>(i)] *
             resid[static_cast<std::size_t>(i)];
      const int b = basis_[static_cast<std::size_t>(r)];
      if (b >= art_begin_) continue;
      x_[ju(b)] = v;
    }
  }

  LpResult finish(const LinearProgram& lp, LpStatus st, LpResult res) {
    res.status = st;
    if (st != LpStatus::kOptimal) return res;
    refresh_basic_values(lp);
    compute_reduced_costs();
    res.primal.assign(x_.begin(), x_.begin() + nstruct_);
    res.objective = 0.0;
    for (int j = 0; j < nstruct_; ++j) res.objective += lp.variable(j).cost * x_[ju(j)];
    res.dual.assign(static_cast<std::size_t>(rows_), 0.0);
    for (int i = 0; i < rows_; ++i)
      res.dual[static_cast<std::size_t>(i)] =
          -d_[ju(art_begin_ + i)] * art_sign_[static_cast<std::size_t>(i)];
    // Explicit feasibility check on the original data.
    for (int j = 0; j < nstruct_; ++j) {
      const LpVariable& v = lp.variable(j);
      const double tol = kCheckTol * (1.0 + std::fabs(x_[ju(j)]));
      if (x_[ju(j)] < v.lower - tol || x_[ju(j)] > v.upper + tol) res.status = LpStatus::kNumerical;
    }
    for (int i = 0; i < rows_; ++i) {
      const LpRow& row = lp.row(i);
      double act = 0.0;
      for (const auto& [j, a] : row.coeffs) act += a * x_[ju(j)];
      const double tol = 1e-6 * (1.0 + std::fabs(row.rhs));
      const bool ok = row.relation == Relation::kEqual          ? std::fabs(act - row.rhs) <= tol
                      : row.relation == Relation::kLessEqual ? act <= row.rhs + tol
                                                             : act >= row.rhs - tol;
      if (!ok) res.status = LpStatus::kNumerical;
    }
    return res;
  }

  int rows_ = 0, cols_ = 0, nstruct_ = 0, art_begin_ = 0;
  double rhs_scale_ = 0.0;
  std::vector<double> tab_;
  std::vector<double> lower_, upper_, x_, cost_, d_;
  std::vector<char> basic_;
  std::vector<int> basis_;
  std::vector<double> art_sign_;
};

inline LpResult solve_lp(const LinearProgram& lp) {
  SimplexSolver solver;
  return solver.solve(lp);
}

// ---------- Assignment model relaxation ----------

/// Variable layout of the assignment-model LP.
struct Model1Layout {
  int n = 0, m = 0;
  int x(int i, int j) const { return i * m + j; }
  int y(int j) const { return n * m + j; }
  int load(int j) const { return n * m + m + j; }
};

/// Relaxation of: sum_j x_ij = 1 per item; sum_i w_i x_ij = l_j per bin;
/// l_j <= C_j y_j per bin; minimise sum_j f_j y_j + c_j l_j with
/// x, y in [0,1] and l_j in [0, C_j].
inline LinearProgram build_model1_lp(const Instance& instance, Model1Layout* layout = nullptr) {
  const int n = instance.num_items(), m = instance.num_bins();
  LinearProgram lp;
  Model1Layout lay{n, m};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) lp.add_variable(0.0, 1.0, 0.0);
  for (int j = 0; j < m; ++j) lp.add_variable(0.0, 1.0, to_double(instance.bin(j).fixed_cost));
  for (int j = 0; j < m; ++j)
    lp.add_variable(0.0, static_cast<double>(instance.bin(j).capacity),
                    to_double(instance.bin(j).unit_cost));
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < m; ++j) row.emplace_back(lay.x(i, j), 1.0);
    lp.add_row(std::move(row), Relation::kEqual, 1.0);
  }
  for (int j = 0; j < m; ++j) {
    std::vector<std::pair<int, double>> row;
    for (int i = 0; i < n; ++i) row.emplace_back(lay.x(i, j), static_cast<double>(instance.size(i)));
    row.emplace_back(lay.load(j), -1.0);
    lp.add_row(std::move(row), Relation::kEqual, 0.0);
  }
  for (int j = 0; j < m; ++j)
    lp.add_row({{lay.load(j), 1.0}, {lay.y(j), -static_cast<double>(instance.bin(j).capacity)}},
               Relation::kLessEqual, 0.0);
  if (layout) *layout = lay;
  return lp;
}

}  // namespace bpuc
