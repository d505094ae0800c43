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

#ifndef SIP_OPTIMIZE_SOLVER_H_
#define SIP_OPTIMIZE_SOLVER_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "sip/mech/policy.h"
#include "sip/optimize/objective.h"

namespace sip {

struct SolverOptions {
  // Primal step times the constraint operator norm; the dual step is set
  // so the pair stays inside the stable region.
  double step_length = 1.0;
  int max_iters = 10000;
  // Stop once incumbent - lower_bound <= gap_tolerance * (1 + |incumbent|).
  double gap_tolerance = 1e-7;
  bool record_trace = false;
};

struct SolverTraceRow {
  int iteration = 0;
  // Objective of the best feasible kernel so far (non-increasing).
  double objective = 0.0;
  // Extreme privacy ratios of the raw iterate before the feasibility repair.
  double max_ratio = 1.0;
  double min_ratio = 1.0;
  // Best dual lower bound so far.
  double lower_bound = 0.0;
  // Number of privacy constraints with a positive multiplier.
  int active = 0;
};

struct SolveResult {
  ReleasePolicy policy;
  double objective = 0.0;
  // Certified: no feasible kernel has a smaller objective.
  double lower_bound = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<SolverTraceRow> trace;
};

// Minimizes the batched objective with a primal-dual projected gradient
// method on its linear program: primal steps on the kernel (projected onto
// row simplices), dual ascent on the privacy-ratio multipliers. Every
// iterate is mapped to an exactly feasible kernel by mixing it with the
// constant kernel of its own output marginal; the best such kernel is
// returned. Rows with zero belief are set to the output marginal.
absl::StatusOr<SolveResult> SolveBatchPolicy(const BatchObjective& objective,
                                             const SolverOptions& options = {});

absl::StatusOr<SolveResult> SolveBatchPolicy(const BatchObjective& objective,
                                             double step_length, int max_iters);

// Exact optimum of the same linear program by dense simplex. Limited to
// at most 8 inputs (64 kernel entries).
struct OracleResult {
  ReleasePolicy policy;
  double objective = 0.0;
};
absl::StatusOr<OracleResult> ExactOracleSmall(const BatchObjective& objective);

// Which solver produces a batch kernel. kAuto uses the dense simplex up to
// kExactMaxInputs inputs and the first-order method above that.
enum class SolverBackend { kAuto, kFirstOrder, kExact };
inline constexpr int kExactMaxInputs = 8;

std::string_view SolverBackendName(SolverBackend backend);
absl::StatusOr<SolverBackend> ParseSolverBackend(std::string_view name);

// Dispatches on `backend`. An exact solve reports zero iterations, a lower
// bound equal to its objective and, when a trace is requested, one row.
absl::StatusOr<SolveResult> SolveBatchPolicyWith(const BatchObjective& objective,
                                                 SolverBackend backend,
                                                 const SolverOptions& options = {});

// Projects v onto the probability simplex in Euclidean norm.
void ProjectOntoSimplex(std::span<double> v);

std::string TraceToCsv(const std::vector<SolverTraceRow>& trace);

}  // namespace sip

#endif  // SIP_OPTIMIZE_SOLVER_H_
