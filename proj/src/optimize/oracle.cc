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

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "sip/optimize/simplex.h"
#include "sip/optimize/solver.h"

namespace sip {
namespace {

constexpr int kOracleMaxInputs = kExactMaxInputs;
constexpr double kTightTolerance = 1e-9;
constexpr double kNegligibleColumn = 1e-12;

// Trace row for a finished kernel: its ratio extremes and the number of
// ratio constraints holding with equality.
SolverTraceRow SummarizeKernel(const BatchObjective& objective,
                               const Matrix& kernel, double value) {
  const ProbVec& beta = objective.belief();
  const int n = objective.size();
  const double eps = objective.epsilon();
  const double hi = std::exp(eps);
  const double lo = std::exp(-eps);
  SolverTraceRow row;
  row.objective = value;
  row.lower_bound = value;
  for (int r = 0; r < n; ++r) {
    double m = 0.0;
    for (int p = 0; p < n; ++p) m += beta[p] * kernel(p, r);
    if (!(m > 0.0)) continue;
    for (int o = 0; o < n; ++o) {
      const double rho = kernel(o, r) / m;
      row.max_ratio = std::max(row.max_ratio, rho);
      row.min_ratio = std::min(row.min_ratio, rho);
      if (eps < kEpsilonInfinity) {
        row.active += (std::abs(rho - hi) <= kTightTolerance) +
                      (std::abs(rho - lo) <= kTightTolerance);
      }
    }
  }
  return row;
}

}  // namespace

std::string_view SolverBackendName(SolverBackend backend) {
  switch (backend) {
    case SolverBackend::kAuto:
      return "auto";
    case SolverBackend::kFirstOrder:
      return "first-order";
    case SolverBackend::kExact:
      return "exact";
  }
  return "auto";
}

absl::StatusOr<SolverBackend> ParseSolverBackend(std::string_view name) {
  for (SolverBackend b : {SolverBackend::kAuto, SolverBackend::kFirstOrder,
                          SolverBackend::kExact}) {
    if (name == SolverBackendName(b)) return b;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown solver '", std::string(name), "'"));
}

absl::StatusOr<SolveResult> SolveBatchPolicyWith(const BatchObjective& objective,
                                                 SolverBackend backend,
                                                 const SolverOptions& options) {
  if (backend == SolverBackend::kAuto) {
    backend = objective.size() <= kExactMaxInputs ? SolverBackend::kExact
                                                  : SolverBackend::kFirstOrder;
  }
  if (backend == SolverBackend::kFirstOrder) {
    return SolveBatchPolicy(objective, options);
  }
  absl::StatusOr<OracleResult> exact = ExactOracleSmall(objective);
  if (!exact.ok()) return exact.status();
  std::vector<SolverTraceRow> trace;
  if (options.record_trace) {
    trace.push_back(
        SummarizeKernel(objective, exact->policy.kernel(), exact->objective));
  }
  const double value = exact->objective;
  return SolveResult{std::move(exact->policy), value, value, true, 0,
                     std::move(trace)};
}

absl::StatusOr<OracleResult> ExactOracleSmall(const BatchObjective& objective) {
  const int n = objective.size();
  if (n > kOracleMaxInputs) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "instance too large for the exact oracle: %d inputs (max %d)", n,
        kOracleMaxInputs));
  }
  const ProbVec& beta = objective.belief();
  const double lambda =
      objective.epsilon() >= kEpsilonInfinity ? 0.0 : std::exp(-objective.epsilon());
  auto var = [n](int o, int r) { return o * n + r; };

  LinearProgram lp;
  lp.num_vars = n * n;
  lp.cost.assign(n * n, 0.0);
  for (int o = 0; o < n; ++o) {
    for (int r = 0; r < n; ++r) {
      lp.cost[var(o, r)] = beta[o] * objective.distance()(o, r);
    }
  }
  for (int o = 0; o < n; ++o) {
    LinearProgram::Row row{std::vector<double>(n * n, 0.0),
                           LinearProgram::Sense::kEqual, 1.0};
    for (int r = 0; r < n; ++r) row.coeffs[var(o, r)] = 1.0;
    lp.rows.push_back(std::move(row));
  }
  // Both ratio bounds divided through by e^eps:
  //   e^-eps a(o,r) - m(r) <= 0   and   e^-eps m(r) - a(o,r) <= 0.
  for (int o = 0; o < n; ++o) {
    for (int r = 0; r < n; ++r) {
      LinearProgram::Row upper{std::vector<double>(n * n, 0.0),
                               LinearProgram::Sense::kLessEqual, 0.0};
      LinearProgram::Row lower = upper;
      for (int p = 0; p < n; ++p) {
        upper.coeffs[var(p, r)] -= beta[p];
        lower.coeffs[var(p, r)] += lambda * beta[p];
      }
      upper.coeffs[var(o, r)] += lambda;
      lower.coeffs[var(o, r)] -= 1.0;
      lp.rows.push_back(std::move(upper));
      lp.rows.push_back(std::move(lower));
    }
  }
  absl::StatusOr<LpSolution> sol = SolveLinearProgram(lp);
  if (!sol.ok()) return sol.status();

  Matrix kernel(n, n);
  for (int o = 0; o < n; ++o) {
    for (int r = 0; r < n; ++r) kernel(o, r) = std::max(0.0, sol->x[var(o, r)]);
  }
  // Simplex round-off can leave a column of ~1e-17 entries whose ratios
  // are meaningless; such outputs are dropped and the rows renormalized.
  for (int r = 0; r < n; ++r) {
    double mass = 0.0;
    for (int o = 0; o < n; ++o) mass += beta[o] * kernel(o, r);
    if (mass >= kNegligibleColumn) continue;
    for (int o = 0; o < n; ++o) kernel(o, r) = 0.0;
  }
  for (int o = 0; o < n; ++o) {
    double total = 0.0;
    for (int r = 0; r < n; ++r) total += kernel(o, r);
    if (total <= 0.0) continue;  // zero-belief row, replaced below
    for (int r = 0; r < n; ++r) kernel(o, r) /= total;
  }
  // Inputs outside the belief's support release from the output marginal.
  std::vector<double> marginal(n, 0.0);
  for (int o = 0; o < n; ++o) {
    for (int r = 0; r < n; ++r) marginal[r] += beta[o] * kernel(o, r);
  }
  for (int o = 0; o < n; ++o) {
    if (beta[o] > 0.0) continue;
    for (int r = 0; r < n; ++r) kernel(o, r) = marginal[r];
  }
  absl::StatusOr<ReleasePolicy> policy = ReleasePolicy::Create(
      PolicyKind::kBatched, objective.epsilon(), std::move(kernel));
  if (!policy.ok()) return policy.status();
  const double value = objective.Value(policy->kernel());
  return OracleResult{*std::move(policy), value};
}

}  // namespace sip
