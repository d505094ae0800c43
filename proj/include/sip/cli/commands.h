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

#ifndef SIP_CLI_COMMANDS_H_
#define SIP_CLI_COMMANDS_H_

#include <ostream>
#include <string>
#include <vector>

namespace sip {

// Exit codes of RunCli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
// `audit` found a certified bound violated.
inline constexpr int kExitViolation = 2;
inline constexpr int kExitInterrupted = 130;

// Entry point of the `sip` tool; args[0] is the program name. Subcommands:
// estimate, synth, privatize, sweep, audit, example2.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace sip

#endif  // SIP_CLI_COMMANDS_H_
