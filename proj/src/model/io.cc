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

#include "sip/model/io.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "json.hpp"

namespace sip {

using json = nlohmann::json;

std::string ModelToJson(const MarkovModel& model,
                        std::span<const int> symbol_ids) {
  json doc;
  doc["alphabet_size"] = model.alphabet_size();
  doc["prior"] = model.prior().weights();
  doc["transition"] = model.transition().ToRows();
  if (!symbol_ids.empty()) {
    doc["symbol_ids"] = std::vector<int>(symbol_ids.begin(), symbol_ids.end());
  }
  return doc.dump(2) + "\n";
}

absl::StatusOr<MarkovModel> ModelFromJson(std::string_view text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("model document is not a JSON object");
  }
  for (const char* key : {"alphabet_size", "prior", "transition"}) {
    if (!doc.contains(key)) {
      return absl::InvalidArgumentError(
          absl::StrCat("model document lacks field '", key, "'"));
    }
  }
  try {
    const int n = doc["alphabet_size"].get<int>();
    auto prior = doc["prior"].get<std::vector<double>>();
    auto rows = doc["transition"].get<std::vector<std::vector<double>>>();
    if (static_cast<int>(prior.size()) != n ||
        static_cast<int>(rows.size()) != n) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "alphabet_size %d disagrees with prior (%d) or transition (%d)", n,
          prior.size(), rows.size()));
    }
    return MarkovModel::Create(std::move(prior), rows);
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed model document: ", e.what()));
  }
}

absl::StatusOr<MarkovModel> ReadModelFile(const std::string& path) {
  absl::StatusOr<std::string> text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<MarkovModel> model = ModelFromJson(*text);
  if (!model.ok()) {
    return absl::Status(model.status().code(),
                        absl::StrCat(path, ": ", model.status().message()));
  }
  return model;
}

absl::Status WriteModelFile(const std::string& path, const MarkovModel& model,
                            std::span<const int> symbol_ids) {
  return WriteTextFile(path, ModelToJson(model, symbol_ids));
}

absl::StatusOr<Corpus> ParseCorpus(std::istream& in) {
  Corpus corpus;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    Sequence seq;
    for (absl::string_view token :
         absl::StrSplit(line, absl::ByAnyChar(" \t\r"), absl::SkipEmpty())) {
      int value = 0;
      auto [ptr, ec] =
          std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc() || ptr != token.data() + token.size() ||
          value < 0) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "line %d: '%s' is not a nonnegative integer id", line_no, token));
      }
      seq.push_back(value);
    }
    if (!seq.empty()) corpus.push_back(std::move(seq));
  }
  return corpus;
}

absl::StatusOr<Corpus> ReadCorpusFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  absl::StatusOr<Corpus> corpus = ParseCorpus(in);
  if (!corpus.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": ", corpus.status().message()));
  }
  return corpus;
}

std::string FormatSequence(std::span<const int> sequence) {
  return absl::StrJoin(sequence, " ");
}

absl::Status WriteCorpusFile(const std::string& path, const Corpus& corpus) {
  std::string text;
  for (const Sequence& seq : corpus) {
    absl::StrAppend(&text, FormatSequence(seq), "\n");
  }
  return WriteTextFile(path, text);
}

absl::StatusOr<std::string> ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteTextFile(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot write ", path));
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) return absl::InternalError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

}  // namespace sip
