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

#ifndef SIP_MODEL_MARKOV_H_
#define SIP_MODEL_MARKOV_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "sip/model/prob.h"
#include "sip/model/rng.h"

namespace sip {

// First-order Markov chain over a finite alphabet: the distribution of X_1
// and the kernel transition(u, v) = Pr(X_{k+1} = v | X_k = u).
class MarkovModel {
 public:
  static absl::StatusOr<MarkovModel> Create(ProbVec prior, Matrix transition);
  static absl::StatusOr<MarkovModel> Create(
      std::vector<double> prior, const std::vector<std::vector<double>>& rows);

  // Binary chain with Pr(X_1 = 1) = p1 and q00 = q11 = stay.
  static absl::StatusOr<MarkovModel> BinarySymmetric(double p1, double stay);

  int alphabet_size() const { return prior_.size(); }
  const ProbVec& prior() const { return prior_; }
  const Matrix& transition() const { return transition_; }
  double Transition(int u, int v) const { return transition_(u, v); }

  // Distribution of the next symbol given a distribution of the current one.
  ProbVec Predict(const ProbVec& current) const;

  // Pr(X_1^T = sequence). Symbols must be in range.
  double SequenceProbability(std::span<const int> sequence) const;

 private:
  MarkovModel(ProbVec prior, Matrix transition)
      : prior_(std::move(prior)), transition_(std::move(transition)) {}

  ProbVec prior_;
  Matrix transition_;
};

// Groups w consecutive symbols of a MarkovModel into one composite symbol.
// Batch ids are base-|X| numbers with the first symbol most significant.
class BatchModel {
 public:
  static absl::StatusOr<BatchModel> Create(MarkovModel base, int width);

  const MarkovModel& base() const { return base_; }
  int width() const { return width_; }
  int num_batches() const { return num_batches_; }

  int Encode(std::span<const int> batch) const;
  std::vector<int> Decode(int id) const;
  int LastSymbol(int id) const { return id % base_.alphabet_size(); }

  // Product of per-step conditionals across the batch boundary; the first
  // factor conditions on the last symbol of `previous`.
  absl::StatusOr<double> BatchTransition(std::span<const int> previous,
                                         std::span<const int> next) const;
  double BatchTransition(int previous_id, int next_id) const;

  // Pr(next batch = id | last symbol of the previous batch = u).
  double ProbabilityGivenLast(int last_symbol, int id) const;

  // Distribution of the first batch X_1^w.
  ProbVec FirstBatchDistribution() const;

  // Distribution of the next batch given a distribution over the last
  // symbol of the current batch.
  ProbVec PredictFromLast(const ProbVec& last_symbol) const;

  // The batch chain viewed as a first-order Markov model over composite
  // symbols; exact because each batch depends on its predecessor only
  // through that predecessor's last symbol.
  MarkovModel AsCompositeModel() const;

 private:
  BatchModel(MarkovModel base, int width, int num_batches)
      : base_(std::move(base)), width_(width), num_batches_(num_batches) {}

  MarkovModel base_;
  int width_;
  int num_batches_;
};

// Draws X_1^length from the model. Fails if length < 1.
absl::StatusOr<std::vector<int>> SampleSequence(const MarkovModel& model,
                                                int length, uint64_t seed);

// As above, drawing from a caller-owned stream.
std::vector<int> SampleSequence(const MarkovModel& model, int length,
                                StreamRng& rng);

}  // namespace sip

#endif  // SIP_MODEL_MARKOV_H_
