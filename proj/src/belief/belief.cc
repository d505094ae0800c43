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

#include "sip/belief/belief.h"

#include "absl/strings/str_format.h"

namespace sip {

BeliefState InitBelief(const MarkovModel& model) {
  return BeliefState{model.prior(), 1};
}

BeliefState InitBatchBelief(const BatchModel& model) {
  return BeliefState{model.FirstBatchDistribution(), 1};
}

absl::StatusOr<ProbVec> Posterior(const ProbVec& belief, const Matrix& kernel,
                                  int released) {
  const int n = belief.size();
  if (kernel.rows() != n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "kernel has %d rows but the belief has %d entries", kernel.rows(), n));
  }
  if (released < 0 || released >= kernel.cols()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("released symbol %d is out of range", released));
  }
  std::vector<double> post(n);
  double mass = 0.0;
  for (int x = 0; x < n; ++x) {
    post[x] = belief[x] * kernel(x, released);
    mass += post[x];
  }
  if (!(mass > 0.0)) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "zero-probability observation: symbol %d cannot be released under "
        "this belief and kernel",
        released));
  }
  for (double& p : post) p /= mass;
  return ProbVec::Normalize(std::move(post));
}

std::vector<double> PredictedOutput(const ProbVec& belief,
                                    const Matrix& kernel) {
  std::vector<double> out(kernel.cols(), 0.0);
  for (int x = 0; x < belief.size(); ++x) {
    if (belief[x] == 0.0) continue;
    std::span<const double> row = kernel.row(x);
    for (int y = 0; y < kernel.cols(); ++y) out[y] += belief[x] * row[y];
  }
  return out;
}

absl::StatusOr<BeliefState> UpdateInst(const BeliefState& belief,
                                       const Matrix& kernel, int released,
                                       const MarkovModel& model) {
  if (belief.dist.size() != model.alphabet_size()) {
    return absl::InvalidArgumentError("belief and model sizes differ");
  }
  absl::StatusOr<ProbVec> post = Posterior(belief.dist, kernel, released);
  if (!post.ok()) return post.status();
  return BeliefState{model.Predict(*post), belief.step + 1};
}

absl::StatusOr<BeliefState> UpdateBatch(const BeliefState& belief,
                                        const Matrix& kernel, int released,
                                        const BatchModel& current,
                                        const BatchModel& next) {
  if (belief.dist.size() != current.num_batches()) {
    return absl::InvalidArgumentError("belief and batch model sizes differ");
  }
  if (next.base().alphabet_size() != current.base().alphabet_size()) {
    return absl::InvalidArgumentError("batch models use different alphabets");
  }
  absl::StatusOr<ProbVec> post = Posterior(belief.dist, kernel, released);
  if (!post.ok()) return post.status();
  std::vector<double> last(current.base().alphabet_size(), 0.0);
  for (int o = 0; o < current.num_batches(); ++o) {
    last[current.LastSymbol(o)] += (*post)[o];
  }
  absl::StatusOr<ProbVec> last_dist = ProbVec::Normalize(std::move(last));
  if (!last_dist.ok()) return last_dist.status();
  return BeliefState{next.PredictFromLast(*last_dist), belief.step + 1};
}

absl::StatusOr<BeliefState> UpdateBatch(const BeliefState& belief,
                                        const Matrix& kernel, int released,
                                        const BatchModel& model) {
  return UpdateBatch(belief, kernel, released, model, model);
}

}  // namespace sip
