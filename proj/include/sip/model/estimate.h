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

#ifndef SIP_MODEL_ESTIMATE_H_
#define SIP_MODEL_ESTIMATE_H_

#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "sip/model/markov.h"

namespace sip {

using Sequence = std::vector<int>;
using Corpus = std::vector<Sequence>;

struct EstimateOptions {
  // Additive count added to every prior and transition cell.
  double smoothing = 0.0;
  // Alphabet size; inferred as max(2, largest id + 1) when unset.
  std::optional<int> alphabet_size;
};

// Frequency estimate of a first-order chain. Empty sequences are ignored;
// transition rows without observations (after smoothing) become uniform.
absl::StatusOr<MarkovModel> EstimateMarkov(const Corpus& corpus,
                                           const EstimateOptions& options = {});

// Result of remapping a corpus onto its most frequent symbols.
struct TopKResult {
  Corpus corpus;
  // kept_ids[i] is the original id mapped to dense id i. Every other id maps
  // to the dense id kept_ids.size() ("other").
  std::vector<int> kept_ids;
};

// Keeps the k most frequent ids (ties broken by smaller id) and merges the
// rest into a single bucket, which is always present in the alphabet.
absl::StatusOr<TopKResult> ApplyTopK(const Corpus& corpus, int k);

// Rewrites each sequence as overlapping tuples of `order` symbols encoded in
// base `alphabet_size` (oldest symbol most significant), turning an
// order-L chain into a first-order chain over composite symbols.
absl::StatusOr<Corpus> AugmentOrder(const Corpus& corpus, int alphabet_size,
                                    int order);

}  // namespace sip

#endif  // SIP_MODEL_ESTIMATE_H_
