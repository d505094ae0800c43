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

#ifndef SIP_OPTIMIZE_OBJECTIVE_H_
#define SIP_OPTIMIZE_OBJECTIVE_H_

#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "sip/model/prob.h"

namespace sip {

// Per-position comparison of query values, summed over the batch.
enum class DistanceKind {
  kHamming,          // number of positions whose values differ
  kAbsolute,         // sum of |q(o_i) - q(r_i)|
  kSquared,          // sum of (q(o_i) - q(r_i))^2; not a metric for |X| > 2
  kIndicatorBucket,  // 1 if any position differs, else 0
};

std::string_view DistanceKindName(DistanceKind kind);
absl::StatusOr<DistanceKind> ParseDistanceKind(std::string_view name);

// Query applied to each symbol before comparison: identity, or a bucket
// map sending symbol s to bucket[s].
struct QueryMap {
  std::vector<int> bucket;  // empty means identity

  int Apply(int symbol) const { return bucket.empty() ? symbol : bucket[symbol]; }
};

// Distance between batches of `width` symbols, indexed by batch id (first
// symbol most significant).
absl::StatusOr<Matrix> BatchDistanceMatrix(int alphabet_size, int width,
                                           DistanceKind kind,
                                           const QueryMap& query = {});

// Checks zero diagonal, symmetry, nonnegativity and the triangle inequality
// (all triples up to 128 points, 200000 seeded random triples beyond).
absl::Status ValidateMetric(const Matrix& distance);

// Expected distortion sum_{o,r} belief(o) kernel(o,r) D(o,r) minimized over
// kernels whose ratios kernel(o,r) / sum_o' belief(o') kernel(o',r) lie in
// [e^-eps, e^eps].
class BatchObjective {
 public:
  static absl::StatusOr<BatchObjective> Create(Matrix distance, ProbVec belief,
                                               double epsilon);

  const Matrix& distance() const { return distance_; }
  const ProbVec& belief() const { return belief_; }
  double epsilon() const { return epsilon_; }
  int size() const { return belief_.size(); }

  double Value(const Matrix& kernel) const;
  // Gradient of Value: entry (o, r) is belief(o) D(o, r).
  Matrix Gradient() const;

 private:
  BatchObjective(Matrix distance, ProbVec belief, double epsilon)
      : distance_(std::move(distance)),
        belief_(std::move(belief)),
        epsilon_(epsilon) {}

  Matrix distance_;
  ProbVec belief_;
  double epsilon_;
};

}  // namespace sip

#endif  // SIP_OPTIMIZE_OBJECTIVE_H_
