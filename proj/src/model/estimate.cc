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

#include "sip/model/estimate.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "absl/strings/str_format.h"

namespace sip {

absl::StatusOr<MarkovModel> EstimateMarkov(const Corpus& corpus,
                                           const EstimateOptions& options) {
  const double s = options.smoothing;
  if (!(s >= 0.0) || !std::isfinite(s)) {
    return absl::InvalidArgumentError("smoothing must be a finite value >= 0");
  }
  int max_id = -1;
  int64_t num_sequences = 0;
  for (const Sequence& seq : corpus) {
    if (seq.empty()) continue;
    ++num_sequences;
    for (int x : seq) {
      if (x < 0) {
        return absl::InvalidArgumentError(
            absl::StrFormat("negative symbol id %d", x));
      }
      max_id = std::max(max_id, x);
    }
  }
  if (num_sequences == 0) return absl::InvalidArgumentError("empty corpus");

  int n = std::max(2, max_id + 1);
  if (options.alphabet_size.has_value()) {
    if (*options.alphabet_size <= max_id) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "symbol id %d does not fit alphabet size %d", max_id,
          *options.alphabet_size));
    }
    n = *options.alphabet_size;
  }

  std::vector<double> first(n, 0.0);
  Matrix counts(n, n);
  for (const Sequence& seq : corpus) {
    if (seq.empty()) continue;
    first[seq[0]] += 1.0;
    for (size_t k = 1; k < seq.size(); ++k) counts(seq[k - 1], seq[k]) += 1.0;
  }

  std::vector<double> prior(n);
  const double prior_total = static_cast<double>(num_sequences) + s * n;
  for (int u = 0; u < n; ++u) prior[u] = (first[u] + s) / prior_total;

  Matrix transition(n, n);
  for (int u = 0; u < n; ++u) {
    double row_total = s * n;
    for (int v = 0; v < n; ++v) row_total += counts(u, v);
    for (int v = 0; v < n; ++v) {
      transition(u, v) =
          row_total > 0.0 ? (counts(u, v) + s) / row_total : 1.0 / n;
    }
  }
  absl::StatusOr<ProbVec> p = ProbVec::Create(std::move(prior));
  if (!p.ok()) return p.status();
  return MarkovModel::Create(*std::move(p), std::move(transition));
}

absl::StatusOr<TopKResult> ApplyTopK(const Corpus& corpus, int k) {
  if (k < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("top-k must be >= 1, got %d", k));
  }
  std::map<int, int64_t> freq;
  for (const Sequence& seq : corpus) {
    for (int x : seq) ++freq[x];
  }
  std::vector<std::pair<int, int64_t>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (static_cast<int>(ranked.size()) > k) ranked.resize(k);

  TopKResult result;
  std::map<int, int> dense;
  for (const auto& [id, count] : ranked) {
    dense[id] = static_cast<int>(result.kept_ids.size());
    result.kept_ids.push_back(id);
  }
  const int other = static_cast<int>(result.kept_ids.size());
  result.corpus.reserve(corpus.size());
  for (const Sequence& seq : corpus) {
    Sequence mapped;
    mapped.reserve(seq.size());
    for (int x : seq) {
      auto it = dense.find(x);
      mapped.push_back(it == dense.end() ? other : it->second);
    }
    result.corpus.push_back(std::move(mapped));
  }
  return result;
}

absl::StatusOr<Corpus> AugmentOrder(const Corpus& corpus, int alphabet_size,
                                    int order) {
  if (order < 1) return absl::InvalidArgumentError("order must be >= 1");
  double composite = std::pow(static_cast<double>(alphabet_size), order);
  if (composite > (1 << 24)) {
    return absl::InvalidArgumentError("augmented alphabet is too large");
  }
  Corpus out;
  out.reserve(corpus.size());
  for (const Sequence& seq : corpus) {
    Sequence tuples;
    for (size_t k = order - 1; k < seq.size(); ++k) {
      int id = 0;
      for (size_t j = k + 1 - order; j <= k; ++j) {
        if (seq[j] < 0 || seq[j] >= alphabet_size) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "symbol %d outside alphabet of size %d", seq[j], alphabet_size));
        }
        id = id * alphabet_size + seq[j];
      }
      tuples.push_back(id);
    }
    out.push_back(std::move(tuples));
  }
  return out;
}

}  // namespace sip
