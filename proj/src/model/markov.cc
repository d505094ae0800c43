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

#include "sip/model/markov.h"

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace sip {
namespace {

// Largest composite alphabet a BatchModel will index.
constexpr int64_t kMaxBatches = int64_t{1} << 24;

}  // namespace

absl::StatusOr<MarkovModel> MarkovModel::Create(ProbVec prior,
                                                Matrix transition) {
  const int n = prior.size();
  if (transition.rows() != n || transition.cols() != n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "transition is %dx%d but the prior has %d entries", transition.rows(),
        transition.cols(), n));
  }
  absl::StatusOr<Matrix> rows = NormalizeRows(std::move(transition));
  if (!rows.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid transition: ", rows.status().message()));
  }
  return MarkovModel(std::move(prior), *std::move(rows));
}

absl::StatusOr<MarkovModel> MarkovModel::Create(
    std::vector<double> prior, const std::vector<std::vector<double>>& rows) {
  absl::StatusOr<ProbVec> p = ProbVec::Create(std::move(prior));
  if (!p.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid prior: ", p.status().message()));
  }
  absl::StatusOr<Matrix> m = Matrix::FromRows(rows);
  if (!m.ok()) return m.status();
  return Create(*std::move(p), *std::move(m));
}

absl::StatusOr<MarkovModel> MarkovModel::BinarySymmetric(double p1,
                                                         double stay) {
  return Create({1.0 - p1, p1}, {{stay, 1.0 - stay}, {1.0 - stay, stay}});
}

ProbVec MarkovModel::Predict(const ProbVec& current) const {
  const int n = alphabet_size();
  std::vector<double> next(n, 0.0);
  for (int u = 0; u < n; ++u) {
    const double w = current[u];
    if (w == 0.0) continue;
    std::span<const double> row = transition_.row(u);
    for (int v = 0; v < n; ++v) next[v] += w * row[v];
  }
  // Mass is positive because `current` is a distribution and rows sum to 1.
  return *ProbVec::Normalize(std::move(next));
}

double MarkovModel::SequenceProbability(std::span<const int> sequence) const {
  if (sequence.empty()) return 1.0;
  double p = prior_[sequence[0]];
  for (size_t k = 1; k < sequence.size() && p > 0.0; ++k) {
    p *= transition_(sequence[k - 1], sequence[k]);
  }
  return p;
}

absl::StatusOr<BatchModel> BatchModel::Create(MarkovModel base, int width) {
  if (width < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("batch width must be >= 1, got %d", width));
  }
  int64_t count = 1;
  for (int i = 0; i < width; ++i) {
    count *= base.alphabet_size();
    if (count > kMaxBatches) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "alphabet %d at width %d exceeds the composite alphabet limit",
          base.alphabet_size(), width));
    }
  }
  return BatchModel(std::move(base), width, static_cast<int>(count));
}

int BatchModel::Encode(std::span<const int> batch) const {
  int id = 0;
  for (int s : batch) id = id * base_.alphabet_size() + s;
  return id;
}

std::vector<int> BatchModel::Decode(int id) const {
  const int n = base_.alphabet_size();
  std::vector<int> out(width_);
  for (int i = width_ - 1; i >= 0; --i) {
    out[i] = id % n;
    id /= n;
  }
  return out;
}

absl::StatusOr<double> BatchModel::BatchTransition(
    std::span<const int> previous, std::span<const int> next) const {
  if (static_cast<int>(previous.size()) != width_ ||
      static_cast<int>(next.size()) != width_) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "batches must have length %d, got %d and %d", width_, previous.size(),
        next.size()));
  }
  const int n = base_.alphabet_size();
  for (std::span<const int> b : {previous, next}) {
    for (int s : b) {
      if (s < 0 || s >= n) {
        return absl::InvalidArgumentError(
            absl::StrFormat("symbol %d outside alphabet of size %d", s, n));
      }
    }
  }
  double p = 1.0;
  int last = previous.back();
  for (int s : next) {
    p *= base_.Transition(last, s);
    last = s;
  }
  return p;
}

double BatchModel::ProbabilityGivenLast(int last_symbol, int id) const {
  const int n = base_.alphabet_size();
  double p = 1.0;
  // Walk the digits from least significant (last symbol) to most.
  int rest = id;
  int next = rest % n;
  rest /= n;
  for (int i = width_ - 1; i > 0; --i) {
    const int prev = rest % n;
    rest /= n;
    p *= base_.Transition(prev, next);
    next = prev;
  }
  return p * base_.Transition(last_symbol, next);
}

double BatchModel::BatchTransition(int previous_id, int next_id) const {
  return ProbabilityGivenLast(LastSymbol(previous_id), next_id);
}

ProbVec BatchModel::FirstBatchDistribution() const {
  std::vector<double> w(num_batches_);
  for (int id = 0; id < num_batches_; ++id) {
    w[id] = base_.SequenceProbability(Decode(id));
  }
  return *ProbVec::Normalize(std::move(w));
}

ProbVec BatchModel::PredictFromLast(const ProbVec& last_symbol) const {
  std::vector<double> w(num_batches_, 0.0);
  for (int u = 0; u < base_.alphabet_size(); ++u) {
    if (last_symbol[u] == 0.0) continue;
    for (int id = 0; id < num_batches_; ++id) {
      w[id] += last_symbol[u] * ProbabilityGivenLast(u, id);
    }
  }
  return *ProbVec::Normalize(std::move(w));
}

MarkovModel BatchModel::AsCompositeModel() const {
  Matrix t(num_batches_, num_batches_);
  for (int o = 0; o < num_batches_; ++o) {
    for (int r = 0; r < num_batches_; ++r) t(o, r) = BatchTransition(o, r);
  }
  return *MarkovModel::Create(FirstBatchDistribution(), std::move(t));
}

absl::StatusOr<std::vector<int>> SampleSequence(const MarkovModel& model,
                                                int length, uint64_t seed) {
  if (length < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sequence length must be >= 1, got %d", length));
  }
  StreamRng rng(seed, 0);
  return SampleSequence(model, length, rng);
}

std::vector<int> SampleSequence(const MarkovModel& model, int length,
                                StreamRng& rng) {
  std::vector<int> out;
  out.reserve(length);
  if (length <= 0) return out;
  out.push_back(SampleIndex(model.prior().weights(), rng.Uniform()));
  for (int k = 1; k < length; ++k) {
    out.push_back(
        SampleIndex(model.transition().row(out.back()), rng.Uniform()));
  }
  return out;
}

}  // namespace sip
