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

#ifndef SIP_OPTIMIZE_FEASIBILITY_H_
#define SIP_OPTIMIZE_FEASIBILITY_H_

#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "sip/model/prob.h"

namespace sip {

inline constexpr double kFeasibilityTolerance = 1e-6;

struct FeasibilityReport {
  // Extremes of kernel(o, r) / m(r), m(r) = sum_o belief(o) kernel(o, r),
  // over outputs with m(r) > 0.
  double max_ratio = 1.0;
  double min_ratio = 1.0;
  // Largest |log ratio|; +inf when some ratio is 0.
  double worst_log_ratio = 0.0;
  // (o, r) pairs whose ratio leaves [e^-eps - tol, e^eps + tol].
  std::vector<std::pair<int, int>> violations;

  bool feasible() const { return violations.empty(); }
};

absl::StatusOr<FeasibilityReport> CheckFeasibility(
    const Matrix& kernel, const ProbVec& belief, double epsilon,
    double tolerance = kFeasibilityTolerance);

}  // namespace sip

#endif  // SIP_OPTIMIZE_FEASIBILITY_H_
