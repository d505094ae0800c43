// Copyright 2026 The Sequence Privacy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "sip/optimize/simplex.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_format.h"

namespace sip {
namespace {

constexpr double kPivotTolerance = 1e-11;
constexpr double kPhaseOneTolerance = 1e-9;
constexpr int kMaxPivots = 200000;

class Tableau {
 public:
  Tableau(int rows, int cols)
      : m_(rows), n_(cols), a_(static_cast<size_t>(rows + 1) * (cols + 1)),
        basis_(rows, -1) {}

  double& at(int i, int j) { return a_[static_cast<size_t>(i) * (n_ + 1) + j]; }
  double& rhs(int i) { return at(i, n_); }
  int& basis(int i) { return basis_[i]; }
  int rows() const { return m_; }

  // Loads reduced costs for `cost` given the current basis.
  void SetObjective(const std::vector<double>& cost) {
    for (int j = 0; j <= n_; ++j) at(m_, j) = j < n_ ? cost[j] : 0.0;
    for (int i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j <= n_; ++j) at(m_, j) -= cb * at(i, j);
    }
  }

  double Objective() { return -at(m_, n_); }

  void Pivot(int r, int c) {
    const double p = at(r, c);
    for (int j = 0; j <= n_; ++j) at(r, j) /= p;
    at(r, c) = 1.0;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (int j = 0; j <= n_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
    }
    basis_[r] = c;
  }

  // Bland's rule over columns with allowed[j].
  absl::Status Run(const std::vector<bool>& allowed, int& pivots) {
    while (true) {
      int enter = -1;
      for (int j = 0; j < n_; ++j) {
        if (allowed[j] && at(m_, j) < -kPivotTolerance) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return absl::OkStatus();
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double coef = at(i, enter);
        if (coef <= kPivotTolerance) continue;
        const double ratio = rhs(i) / coef;
        if (leave < 0 || ratio < best - 1e-12 ||
            (std::abs(ratio - best) <= 1e-12 && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return absl::OutOfRangeError("linear program is unbounded");
      if (++pivots > kMaxPivots) {
        return absl::ResourceExhaustedError("simplex pivot limit reached");
      }
      Pivot(leave, enter);
    }
  }

 private:
  int m_;
  int n_;
  std::vector<double> a_;
  std::vector<int> basis_;
};

}  // namespace

absl::StatusOr<LpSolution> SolveLinearProgram(const LinearProgram& lp) {
  const int nv = lp.num_vars;
  const int m = static_cast<int>(lp.rows.size());
  if (static_cast<int>(lp.cost.size()) != nv) {
    return absl::InvalidArgumentError("cost length differs from num_vars");
  }
  // Column layout: originals, one slack/surplus per inequality, then one
  // artificial per row that lacks a natural basic column.
  int num_slack = 0;
  int num_art = 0;
  std::vector<double> sign(m);
  std::vector<LinearProgram::Sense> sense(m);
  for (int i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    if (static_cast<int>(row.coeffs.size()) != nv) {
      return absl::InvalidArgumentError(
          absl::StrFormat("row %d has the wrong number of coefficients", i));
    }
    sign[i] = row.rhs < 0.0 ? -1.0 : 1.0;
    sense[i] = row.sense;
    if (sign[i] < 0.0 && row.sense != LinearProgram::Sense::kEqual) {
      sense[i] = row.sense == LinearProgram::Sense::kLessEqual
                     ? LinearProgram::Sense::kGreaterEqual
                     : LinearProgram::Sense::kLessEqual;
    }
    if (sense[i] != LinearProgram::Sense::kEqual) ++num_slack;
    if (sense[i] != LinearProgram::Sense::kLessEqual) ++num_art;
  }
  const int cols = nv + num_slack + num_art;
  Tableau t(m, cols);
  std::vector<bool> is_art(cols, false);
  int next_slack = nv;
  int next_art = nv + num_slack;
  for (int i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    for (int j = 0; j < nv; ++j) t.at(i, j) = sign[i] * row.coeffs[j];
    t.rhs(i) = sign[i] * row.rhs;
    if (sense[i] == LinearProgram::Sense::kLessEqual) {
      t.at(i, next_slack) = 1.0;
      t.basis(i) = next_slack++;
    } else {
      if (sense[i] == LinearProgram::Sense::kGreaterEqual) {
        t.at(i, next_slack++) = -1.0;
      }
      t.at(i, next_art) = 1.0;
      is_art[next_art] = true;
      t.basis(i) = next_art++;
    }
  }

  int pivots = 0;
  std::vector<bool> all(cols, true);
  if (num_art > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (int j = 0; j < cols; ++j) phase1[j] = is_art[j] ? 1.0 : 0.0;
    t.SetObjective(phase1);
    if (absl::Status s = t.Run(all, pivots); !s.ok()) return s;
    if (t.Objective() > kPhaseOneTolerance) {
      return absl::FailedPreconditionError("linear program is infeasible");
    }
    // Pivot remaining zero-level artificials out where possible; rows where
    // that fails are redundant and stay inert.
    for (int i = 0; i < m; ++i) {
      if (!is_art[t.basis(i)]) continue;
      for (int j = 0; j < cols; ++j) {
        if (!is_art[j] && std::abs(t.at(i, j)) > 1e-9) {
          t.Pivot(i, j);
          break;
        }
      }
    }
  }
  std::vector<double> phase2(cols, 0.0);
  for (int j = 0; j < nv; ++j) phase2[j] = lp.cost[j];
  t.SetObjective(phase2);
  std::vector<bool> allowed(cols);
  for (int j = 0; j < cols; ++j) allowed[j] = !is_art[j];
  if (absl::Status s = t.Run(allowed, pivots); !s.ok()) return s;

  LpSolution sol;
  sol.x.assign(nv, 0.0);
  for (int i = 0; i < m; ++i) {
    if (t.basis(i) < nv) sol.x[t.basis(i)] = std::max(0.0, t.rhs(i));
  }
  sol.objective = 0.0;
  for (int j = 0; j < nv; ++j) sol.objective += lp.cost[j] * sol.x[j];
  return sol;
}

}  // namespace sip
