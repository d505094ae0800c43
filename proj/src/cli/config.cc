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

#include "sip/cli/config.h"

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "json.hpp"
#include "sip/model/io.h"

namespace sip {
namespace {

using json = nlohmann::json;

absl::StatusOr<std::string> ScalarToken(const std::string& key,
                                        const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return value.dump();
  if (value.is_number()) return value.dump();
  return absl::InvalidArgumentError(
      absl::StrCat("config key '", key, "' must be a scalar or a list"));
}

}  // namespace

absl::StatusOr<std::vector<std::string>> ExpandConfig(
    const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 == args.size()) {
        return absl::InvalidArgumentError("--config needs a file argument");
      }
      path = args[++i];
    } else if (absl::StartsWith(args[i], "--config=")) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;

  absl::StatusOr<std::string> text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  json doc = json::parse(*text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrCat("config file ", path, " is not a JSON object"));
  }
  std::vector<std::string> injected;
  for (const auto& [key, value] : doc.items()) {
    if (key == "command" || key == "config") continue;
    const std::string flag = "--" + key;
    if (value.is_boolean()) {
      if (value.get<bool>()) injected.push_back(flag);
      continue;
    }
    if (value.is_null()) continue;
    std::string token;
    if (value.is_array()) {
      std::vector<std::string> parts;
      for (const json& item : value) {
        absl::StatusOr<std::string> part = ScalarToken(key, item);
        if (!part.ok()) return part.status();
        parts.push_back(*part);
      }
      token = absl::StrJoin(parts, ",");
    } else {
      absl::StatusOr<std::string> scalar = ScalarToken(key, value);
      if (!scalar.ok()) return scalar.status();
      token = *scalar;
    }
    injected.push_back(flag);
    injected.push_back(token);
  }
  // args[0] is the program, args[1] the subcommand (if any).
  const size_t insert_at = std::min<size_t>(rest.size(), 2);
  rest.insert(rest.begin() + insert_at, injected.begin(), injected.end());
  return rest;
}

absl::StatusOr<std::vector<double>> ParseDoubleList(std::string_view text) {
  std::vector<double> values;
  for (absl::string_view part :
       absl::StrSplit(absl::string_view(text.data(), text.size()), ',')) {
    part = absl::StripAsciiWhitespace(part);
    if (part.empty()) continue;
    double v = 0.0;
    if (!absl::SimpleAtod(part, &v)) {
      return absl::InvalidArgumentError(
          absl::StrCat("not a number: '", part, "'"));
    }
    values.push_back(v);
  }
  return values;
}

absl::StatusOr<std::vector<int>> ParseIntList(std::string_view text) {
  std::vector<int> values;
  for (absl::string_view part :
       absl::StrSplit(absl::string_view(text.data(), text.size()), ',')) {
    part = absl::StripAsciiWhitespace(part);
    if (part.empty()) continue;
    int v = 0;
    if (!absl::SimpleAtoi(part, &v)) {
      return absl::InvalidArgumentError(
          absl::StrCat("not an integer: '", part, "'"));
    }
    values.push_back(v);
  }
  return values;
}

}  // namespace sip
