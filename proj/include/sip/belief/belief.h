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

#ifndef SIP_BELIEF_BELIEF_H_
#define SIP_BELIEF_BELIEF_H_

#include <vector>

#include "absl/status/statusor.h"
#include "sip/model/markov.h"
#include "sip/model/prob.h"

namespace sip {

// The adversary's predictive distribution of the next unreleased symbol (or
// batch) given every release so far. `step` is the 1-based index of that
// symbol or batch.
struct BeliefState {
  ProbVec dist;
  int step = 1;
};

BeliefState InitBelief(const MarkovModel& model);
BeliefState InitBatchBelief(const BatchModel& model);

// Pr(X = x | Y = released) for a release drawn from `kernel` (rows indexed
// by input). Fails with FailedPrecondition when the release has probability
// zero under `belief`.
absl::StatusOr<ProbVec> Posterior(const ProbVec& belief, const Matrix& kernel,
                                  int released);

// Pr(Y = y) = sum_x belief(x) kernel(x, y).
std::vector<double> PredictedOutput(const ProbVec& belief,
                                    const Matrix& kernel);

// Bayes correction by kernel(released | x), then one transition step.
absl::StatusOr<BeliefState> UpdateInst(const BeliefState& belief,
                                       const Matrix& kernel, int released,
                                       const MarkovModel& model);

// Batched form: correction over batches, then prediction of the next batch
// from the posterior of the current batch's last symbol. `next` may have a
// different width than `current` (a shrunk final batch).
absl::StatusOr<BeliefState> UpdateBatch(const BeliefState& belief,
                                        const Matrix& kernel, int released,
                                        const BatchModel& current,
                                        const BatchModel& next);
absl::StatusOr<BeliefState> UpdateBatch(const BeliefState& belief,
                                        const Matrix& kernel, int released,
                                        const BatchModel& model);

}  // namespace sip

#endif  // SIP_BELIEF_BELIEF_H_
