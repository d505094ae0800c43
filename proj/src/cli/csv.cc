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

#include "sip/cli/csv.h"

#include <atomic>
#include <cerrno>
#include <cmath>
#include <csignal>
#include <cstring>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"

namespace sip {
namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void HandleSigint(int) { g_interrupted.store(true); }

}  // namespace

void InstallInterruptHandler() { std::signal(SIGINT, HandleSigint); }
bool Interrupted() { return g_interrupted.load(); }
void SetInterrupted(bool value) { g_interrupted.store(value); }

void LineWriter::Closer::operator()(std::FILE* f) const {
  if (f != nullptr && f != stdout) std::fclose(f);
}

absl::StatusOr<LineWriter> LineWriter::Open(const std::string& path) {
  if (path == "-") return LineWriter(stdout, path);
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) {
    return absl::NotFoundError(absl::StrCat("cannot open ", path,
                                            " for writing: ",
                                            std::strerror(errno)));
  }
  return LineWriter(f, path);
}

absl::Status LineWriter::Write(std::string_view line) {
  if (!file_) return absl::FailedPreconditionError("writer is closed");
  std::string buffer(line);
  buffer.push_back('\n');
  if (std::fwrite(buffer.data(), 1, buffer.size(), file_.get()) !=
          buffer.size() ||
      std::fflush(file_.get()) != 0) {
    return absl::DataLossError(absl::StrCat("write to ", path_, " failed"));
  }
  return absl::OkStatus();
}

absl::Status LineWriter::Close() {
  if (!file_) return absl::OkStatus();
  std::FILE* f = file_.release();
  if (f == stdout) return absl::OkStatus();
  if (std::fclose(f) != 0) {
    return absl::DataLossError(absl::StrCat("closing ", path_, " failed"));
  }
  return absl::OkStatus();
}

std::string FormatNumber(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return absl::StrFormat("%.17g", x);
}

absl::StatusOr<CsvWriter> CsvWriter::Open(
    const std::string& path, const nlohmann::json& metadata,
    const std::vector<std::string>& header) {
  absl::StatusOr<LineWriter> out = LineWriter::Open(path);
  if (!out.ok()) return out.status();
  if (absl::Status s = out->Write("# " + metadata.dump()); !s.ok()) return s;
  if (absl::Status s = out->Write(absl::StrJoin(header, ",")); !s.ok()) {
    return s;
  }
  return CsvWriter(*std::move(out), header.size());
}

absl::Status CsvWriter::WriteRow(const std::vector<std::string>& cells) {
  if (Interrupted()) return absl::CancelledError("interrupted");
  if (cells.size() != columns_) {
    return absl::InternalError(absl::StrFormat(
        "row has %d cells, header has %d", cells.size(), columns_));
  }
  return out_.Write(absl::StrJoin(cells, ","));
}

absl::StatusOr<CsvDocument> ParseCsv(std::string_view text) {
  CsvDocument doc;
  bool have_header = false;
  int line_no = 0;
  for (absl::string_view line :
       absl::StrSplit(absl::string_view(text.data(), text.size()), '\n')) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (have_header || !doc.metadata.is_null()) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "line %d: metadata must be the first line", line_no));
      }
      line.remove_prefix(1);
      doc.metadata = nlohmann::json::parse(line, nullptr, false);
      if (doc.metadata.is_discarded()) {
        return absl::InvalidArgumentError(
            absl::StrFormat("line %d: metadata is not JSON", line_no));
      }
      continue;
    }
    std::vector<std::string> cells = absl::StrSplit(line, ',');
    if (!have_header) {
      doc.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != doc.header.size()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "line %d has %d cells, header has %d", line_no, cells.size(),
          doc.header.size()));
    }
    doc.rows.push_back(std::move(cells));
  }
  if (!have_header) return absl::InvalidArgumentError("missing header row");
  return doc;
}

}  // namespace sip
