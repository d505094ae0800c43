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

#ifndef SIP_OPTIMIZE_BATCHED_H_
#define SIP_OPTIMIZE_BATCHED_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "sip/mech/stream.h"
#include "sip/model/markov.h"
#include "sip/model/rng.h"
#include "sip/optimize/objective.h"
#include "sip/optimize/solver.h"

namespace sip {

struct BatchedOptions {
  int width = 2;
  DistanceKind distance = DistanceKind::kHamming;
  QueryMap query;
  SolverBackend backend = SolverBackend::kAuto;
  SolverOptions solver;
};

// Batched release over a per-symbol budget schedule. Steps are grouped into
// consecutive batches of `width` symbols; when the width does not divide
// the horizon the final batch is shorter. Each batch spends the sum of its
// steps' budgets and uses the kernel that minimizes expected distortion
// against the current batch belief.
//
// As a StreamMechanism the steps are batches and the alphabet is the
// composite one of full-width batches, so it can be audited against
// BatchModel::AsCompositeModel() when the width divides the horizon.
class BatchedMechanism final : public StreamMechanism {
 public:
  static absl::StatusOr<BatchedMechanism> Create(const MarkovModel& model,
                                                 std::vector<double> schedule,
                                                 BatchedOptions options);

  std::string name() const override { return "sip-batch"; }
  int alphabet_size() const override;
  int num_steps() const override { return static_cast<int>(batch_eps_.size()); }
  double EpsilonAt(int batch) const override { return batch_eps_[batch]; }
  // Infers the batch width from the belief size.
  absl::StatusOr<ReleasePolicy> PolicyAt(int batch,
                                         const ProbVec& belief) const override;

  // Full solver output for batch `batch`.
  absl::StatusOr<SolveResult> Solve(int batch, const ProbVec& belief) const;
  // Solver output for the `width` steps starting at `start`, spending the
  // sum of their budgets. `belief` is over batches of that width.
  absl::StatusOr<SolveResult> SolveSteps(int start, int width,
                                         const ProbVec& belief) const;

  int width() const { return options_.width; }
  int horizon() const { return static_cast<int>(schedule_.size()); }
  // Number of symbols in batch `batch`.
  int BatchWidth(int batch) const;
  const BatchModel& ModelForWidth(int width) const;
  const std::vector<double>& batch_epsilons() const { return batch_eps_; }

 private:
  BatchedMechanism(BatchedOptions options, std::vector<double> schedule,
                   std::vector<double> batch_eps,
                   std::map<int, BatchModel> models,
                   std::map<int, Matrix> distances)
      : options_(std::move(options)),
        schedule_(std::move(schedule)),
        batch_eps_(std::move(batch_eps)),
        models_(std::move(models)),
        distances_(std::move(distances)) {}

  BatchedOptions options_;
  std::vector<double> schedule_;
  std::vector<double> batch_eps_;
  std::map<int, BatchModel> models_;
  std::map<int, Matrix> distances_;
};

// Releases one stream batch by batch. `input` may be shorter than the
// horizon; its final batch is then cut to the remaining symbols and spends
// the budget of the covered steps only. When `solves` is set, every solver
// result is appended to it.
absl::StatusOr<std::vector<int>> PrivatizeBatchedStream(
    const BatchedMechanism& mech, std::span<const int> input, StreamRng& rng,
    std::vector<SolveResult>* solves = nullptr);

}  // namespace sip

#endif  // SIP_OPTIMIZE_BATCHED_H_
