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

#include "sip/optimize/feasibility.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_format.h"

namespace sip {

absl::StatusOr<FeasibilityReport> CheckFeasibility(const Matrix& kernel,
                                                   const ProbVec& belief,
                                                   double epsilon,
                                                   double tolerance) {
  const int n = belief.size();
  if (kernel.rows() != n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "kernel has %d rows but the belief has %d entries", kernel.rows(), n));
  }
  const double hi = std::exp(epsilon) + tolerance;
  const double lo = std::exp(-epsilon) - tolerance;
  FeasibilityReport report;
  for (int r = 0; r < kernel.cols(); ++r) {
    double m = 0.0;
    for (int o = 0; o < n; ++o) m += belief[o] * kernel(o, r);
    if (!(m > 0.0)) continue;
    for (int o = 0; o < n; ++o) {
      const double ratio = kernel(o, r) / m;
      report.max_ratio = std::max(report.max_ratio, ratio);
      report.min_ratio = std::min(report.min_ratio, ratio);
      if (ratio > hi || ratio < lo) report.violations.emplace_back(o, r);
    }
  }
  report.worst_log_ratio =
      report.min_ratio > 0.0
          ? std::max(std::log(report.max_ratio), -std::log(report.min_ratio))
          : std::numeric_limits<double>::infinity();
  return report;
}

}  // namespace sip
