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

#ifndef SIP_CLI_CONFIG_H_
#define SIP_CLI_CONFIG_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace sip {

// Replaces `--config FILE` (or `--config=FILE`) in a command line by one
// flag per key of the flat JSON object in FILE. The generated flags are
// placed right after the subcommand, ahead of the user's own flags, so
// with last-value-wins parsing explicit flags override the file. Booleans
// become bare flags when true and are dropped when false; arrays become
// comma-separated lists. The keys "command" and "config" are ignored, so a
// resolved config recorded by a previous run can be fed back in.
absl::StatusOr<std::vector<std::string>> ExpandConfig(
    const std::vector<std::string>& args);

// Comma-separated lists; surrounding whitespace is ignored.
absl::StatusOr<std::vector<double>> ParseDoubleList(std::string_view text);
absl::StatusOr<std::vector<int>> ParseIntList(std::string_view text);

}  // namespace sip

#endif  // SIP_CLI_CONFIG_H_
