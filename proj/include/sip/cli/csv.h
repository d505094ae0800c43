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

#ifndef SIP_CLI_CSV_H_
#define SIP_CLI_CSV_H_

#include <cstdio>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace sip {

// SIGINT sets a flag instead of killing the process; long loops poll it
// and stop between complete output lines.
void InstallInterruptHandler();
bool Interrupted();
void SetInterrupted(bool value);

// Writes whole lines, flushing after each, so an interrupted run leaves
// only complete lines on disk. The path "-" writes to stdout.
class LineWriter {
 public:
  static absl::StatusOr<LineWriter> Open(const std::string& path);
  // `line` must not contain a newline; one is appended.
  absl::Status Write(std::string_view line);
  absl::Status Close();

 private:
  struct Closer {
    void operator()(std::FILE* f) const;
  };
  explicit LineWriter(std::FILE* file, std::string path)
      : file_(file), path_(std::move(path)) {}
  std::unique_ptr<std::FILE, Closer> file_;
  std::string path_;
};

// %.17g, with "inf" / "-inf" / "nan" spelled out.
std::string FormatNumber(double x);

// CSV with a "# <metadata JSON>" first line and a header row.
class CsvWriter {
 public:
  static absl::StatusOr<CsvWriter> Open(const std::string& path,
                                        const nlohmann::json& metadata,
                                        const std::vector<std::string>& header);
  // Fails with Cancelled, writing nothing, once an interrupt was seen.
  absl::Status WriteRow(const std::vector<std::string>& cells);
  absl::Status Close() { return out_.Close(); }

 private:
  CsvWriter(LineWriter out, size_t columns)
      : out_(std::move(out)), columns_(columns) {}
  LineWriter out_;
  size_t columns_;
};

struct CsvDocument {
  nlohmann::json metadata;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Parses the format written by CsvWriter (no quoting).
absl::StatusOr<CsvDocument> ParseCsv(std::string_view text);

}  // namespace sip

#endif  // SIP_CLI_CSV_H_
