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

#include "sip/optimize/batched.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_format.h"
#include "sip/belief/belief.h"

namespace sip {
namespace {

absl::StatusOr<SolveResult> SolveFor(const Matrix& distance,
                                     const ProbVec& belief, double epsilon,
                                     SolverBackend backend,
                                     const SolverOptions& options) {
  absl::StatusOr<BatchObjective> objective =
      BatchObjective::Create(distance, belief, epsilon);
  if (!objective.ok()) return objective.status();
  return SolveBatchPolicyWith(*objective, backend, options);
}

}  // namespace

absl::StatusOr<BatchedMechanism> BatchedMechanism::Create(
    const MarkovModel& model, std::vector<double> schedule,
    BatchedOptions options) {
  if (options.width < 1) {
    return absl::InvalidArgumentError("batch width must be >= 1");
  }
  if (schedule.empty()) {
    return absl::InvalidArgumentError("budget schedule is empty");
  }
  for (double eps : schedule) {
    if (std::isnan(eps) || eps < 0.0) {
      return absl::InvalidArgumentError("per-step epsilon must be >= 0");
    }
  }
  const int horizon = static_cast<int>(schedule.size());
  const int w = options.width;
  std::vector<double> batch_eps;
  for (int start = 0; start < horizon; start += w) {
    const int end = std::min(horizon, start + w);
    batch_eps.push_back(std::accumulate(schedule.begin() + start,
                                        schedule.begin() + end, 0.0));
  }
  std::map<int, BatchModel> models;
  std::map<int, Matrix> distances;
  for (int width = 1; width <= w; ++width) {
    absl::StatusOr<BatchModel> batch = BatchModel::Create(model, width);
    if (!batch.ok()) return batch.status();
    absl::StatusOr<Matrix> d = BatchDistanceMatrix(
        model.alphabet_size(), width, options.distance, options.query);
    if (!d.ok()) return d.status();
    if (absl::Status s = ValidateMetric(*d); !s.ok()) return s;
    models.emplace(width, *std::move(batch));
    distances.emplace(width, *std::move(d));
  }
  return BatchedMechanism(std::move(options), std::move(schedule),
                          std::move(batch_eps), std::move(models),
                          std::move(distances));
}

int BatchedMechanism::alphabet_size() const {
  return models_.at(options_.width).num_batches();
}

int BatchedMechanism::BatchWidth(int batch) const {
  return std::min(options_.width, horizon() - batch * options_.width);
}

const BatchModel& BatchedMechanism::ModelForWidth(int width) const {
  return models_.at(width);
}

absl::StatusOr<SolveResult> BatchedMechanism::Solve(
    int batch, const ProbVec& belief) const {
  if (batch < 0 || batch >= num_steps()) {
    return absl::OutOfRangeError(absl::StrFormat(
        "batch %d outside the %d batches of the horizon", batch, num_steps()));
  }
  return SolveSteps(batch * options_.width, BatchWidth(batch), belief);
}

absl::StatusOr<SolveResult> BatchedMechanism::SolveSteps(
    int start, int width, const ProbVec& belief) const {
  if (start < 0 || width < 1 || width > options_.width ||
      start + width > horizon()) {
    return absl::OutOfRangeError(absl::StrFormat(
        "steps [%d, %d) do not form a batch of the horizon %d", start,
        start + width, horizon()));
  }
  const Matrix& d = distances_.at(width);
  if (belief.size() != d.rows()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "belief over %d batches does not match a batch of width %d",
        belief.size(), width));
  }
  const double eps = std::accumulate(schedule_.begin() + start,
                                     schedule_.begin() + start + width, 0.0);
  return SolveFor(d, belief, eps, options_.backend, options_.solver);
}

absl::StatusOr<ReleasePolicy> BatchedMechanism::PolicyAt(
    int batch, const ProbVec& belief) const {
  absl::StatusOr<SolveResult> result = Solve(batch, belief);
  if (!result.ok()) return result.status();
  return std::move(result->policy);
}

absl::StatusOr<std::vector<int>> PrivatizeBatchedStream(
    const BatchedMechanism& mech, std::span<const int> input, StreamRng& rng,
    std::vector<SolveResult>* solves) {
  const int n = static_cast<int>(input.size());
  if (n > mech.horizon()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sequence of length %d is longer than the budget schedule (%d)", n,
        mech.horizon()));
  }
  const int w = mech.width();
  const int alphabet = mech.ModelForWidth(1).base().alphabet_size();
  std::vector<int> output;
  output.reserve(n);
  if (n == 0) return output;

  auto width_of = [&](int start) { return std::min(w, n - start); };
  BeliefState belief = InitBatchBelief(mech.ModelForWidth(width_of(0)));
  for (int start = 0, batch = 0; start < n; start += w, ++batch) {
    const int width = width_of(start);
    const BatchModel& model = mech.ModelForWidth(width);
    std::span<const int> chunk = input.subspan(start, width);
    for (int s : chunk) {
      if (s < 0 || s >= alphabet) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "input symbol %d outside alphabet of size %d", s, alphabet));
      }
    }
    absl::StatusOr<SolveResult> result =
        mech.SolveSteps(start, width, belief.dist);
    if (!result.ok()) return result.status();
    absl::StatusOr<int> released =
        PrivatizeStep(result->policy, model.Encode(chunk), rng);
    if (!released.ok()) return released.status();
    std::vector<int> symbols = model.Decode(*released);
    output.insert(output.end(), symbols.begin(), symbols.end());
    if (start + width < n) {
      const BatchModel& next = mech.ModelForWidth(width_of(start + width));
      absl::StatusOr<BeliefState> updated = UpdateBatch(
          belief, result->policy.kernel(), *released, model, next);
      if (!updated.ok()) return updated.status();
      belief = *std::move(updated);
    }
    if (solves != nullptr) solves->push_back(*std::move(result));
  }
  return output;
}

}  // namespace sip
