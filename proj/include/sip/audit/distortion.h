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

#ifndef SIP_AUDIT_DISTORTION_H_
#define SIP_AUDIT_DISTORTION_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "sip/mech/stream.h"
#include "sip/model/markov.h"
#include "sip/model/rng.h"

namespace sip {

// Maps one raw stream to its release, drawing from `rng`.
using Releaser = std::function<absl::StatusOr<std::vector<int>>(
    std::span<const int> input, StreamRng& rng)>;

// Releaser running PrivatizeStream. Both references must outlive it.
Releaser StreamReleaser(const MarkovModel& model, const StreamMechanism& mech);

struct DistortionReport {
  bool exact = true;
  int samples = 0;
  // Expected distance between input and release at each step.
  std::vector<double> per_step;
  // Average over steps.
  double mean = 0.0;
  // Standard error of `mean` across independent streams; 0 when exact.
  double standard_error = 0.0;
};

// Draws `samples` streams X_1^T from the model (stream i uses
// StreamRng(seed, i) for both its input and its release), releases them
// and averages symbol_distance(x_k, y_k).
absl::StatusOr<DistortionReport> MonteCarloDistortion(
    const MarkovModel& model, const Releaser& release,
    const Matrix& symbol_distance, int horizon, int samples, uint64_t seed,
    int threads = 1);

// Exact expectation of distance(x_k, y_k) by enumerating release prefixes.
// For a batched mechanism audited over composite symbols, pass the batch
// distance and divide by the width for a per-symbol figure.
absl::StatusOr<DistortionReport> ExactDistortion(const MarkovModel& model,
                                                 const StreamMechanism& mech,
                                                 const Matrix& distance,
                                                 int horizon);

}  // namespace sip

#endif  // SIP_AUDIT_DISTORTION_H_
