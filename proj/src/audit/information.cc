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

#include "sip/audit/information.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "absl/strings/str_format.h"

namespace sip {

absl::StatusOr<double> MutualInformation(const Matrix& joint) {
  if (joint.rows() == 0 || joint.cols() == 0) {
    return absl::InvalidArgumentError("joint table is empty");
  }
  double total = 0.0;
  std::vector<double> pa(joint.rows(), 0.0);
  std::vector<double> pb(joint.cols(), 0.0);
  for (int a = 0; a < joint.rows(); ++a) {
    for (int b = 0; b < joint.cols(); ++b) {
      const double p = joint(a, b);
      if (!(p >= -kProbTolerance) || !std::isfinite(p)) {
        return absl::InvalidArgumentError(
            absl::StrFormat("joint entry (%d, %d) = %g is invalid", a, b, p));
      }
      total += p;
      pa[a] += std::max(p, 0.0);
      pb[b] += std::max(p, 0.0);
    }
  }
  if (std::abs(total - 1.0) > kProbTolerance) {
    return absl::InvalidArgumentError(
        absl::StrFormat("joint table sums to %.12g, not 1", total));
  }
  double mi = 0.0;
  for (int a = 0; a < joint.rows(); ++a) {
    for (int b = 0; b < joint.cols(); ++b) {
      const double p = joint(a, b);
      if (p > 0.0) mi += p * std::log(p / (pa[a] * pb[b]));
    }
  }
  return std::max(mi, 0.0);
}

}  // namespace sip
