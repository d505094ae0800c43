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

#ifndef SIP_MODEL_IO_H_
#define SIP_MODEL_IO_H_

#include <istream>
#include <span>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "sip/model/estimate.h"
#include "sip/model/markov.h"

namespace sip {

// Model documents are JSON objects with alphabet_size, prior and transition
// (array of rows). An optional symbol_ids array records the original corpus
// id behind each dense id when the alphabet was remapped.
std::string ModelToJson(const MarkovModel& model,
                        std::span<const int> symbol_ids = {});
absl::StatusOr<MarkovModel> ModelFromJson(std::string_view text);

absl::StatusOr<MarkovModel> ReadModelFile(const std::string& path);
absl::Status WriteModelFile(const std::string& path, const MarkovModel& model,
                            std::span<const int> symbol_ids = {});

// One sequence per line of whitespace-separated nonnegative integer ids.
// Blank lines are skipped. Errors name the offending 1-based line.
absl::StatusOr<Corpus> ParseCorpus(std::istream& in);
absl::StatusOr<Corpus> ReadCorpusFile(const std::string& path);

std::string FormatSequence(std::span<const int> sequence);
absl::Status WriteCorpusFile(const std::string& path, const Corpus& corpus);

absl::StatusOr<std::string> ReadTextFile(const std::string& path);
absl::Status WriteTextFile(const std::string& path, std::string_view content);

}  // namespace sip

#endif  // SIP_MODEL_IO_H_
