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

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "sip/cli/commands.h"
#include "sip/cli/config.h"
#include "sip/cli/csv.h"
#include "sip/model/io.h"

namespace sip {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct CmdResult {
  int code = -1;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           absl::StrCat("sip_cli_",
                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  // Runs the installed binary through the shell.
  CmdResult Exec(const std::string& args) const {
    const std::string out = Path("stdout.txt");
    const std::string err = Path("stderr.txt");
    const std::string cmd =
        absl::StrCat(SIP_BINARY_PATH, " ", args, " > ", out, " 2> ", err);
    const int status = std::system(cmd.c_str());
    CmdResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = ReadTextFile(out).value_or("");
    r.err = ReadTextFile(err).value_or("");
    return r;
  }

  // Runs the command in process.
  static CmdResult Call(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    std::vector<std::string> argv = {"sip"};
    argv.insert(argv.end(), args.begin(), args.end());
    CmdResult r;
    r.code = RunCli(argv, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
  }

  std::string Read(const std::string& name) const {
    return ReadTextFile(Path(name)).value();
  }

  void Write(const std::string& name, const std::string& text) const {
    ASSERT_TRUE(WriteTextFile(Path(name), text).ok());
  }

  fs::path dir_;
};

std::string Data(const std::string& name) {
  return absl::StrCat(SIP_DATA_DIR, "/", name);
}

TEST_F(CliTest, EstimateAlternatingCorpus) {
  CmdResult r = Exec(absl::StrCat("estimate --corpus ", Data("alternating.txt"),
                            " --out ", Path("m.json")));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "alphabet_size=2 sequences=1 min_length=4 max_length=4\n");
  MarkovModel m = ReadModelFile(Path("m.json")).value();
  EXPECT_EQ(m.Transition(0, 1), 1.0);
  EXPECT_EQ(m.Transition(1, 0), 1.0);
}

TEST_F(CliTest, EstimateClickStreamsWithTopK) {
  CmdResult r = Exec(absl::StrCat("estimate --corpus ", Data("clicks.txt"),
                            " --top-k 2 --out ", Path("m.json")));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "alphabet_size=3 sequences=3 min_length=3 max_length=5\n");
  json doc = json::parse(Read("m.json"));
  EXPECT_EQ(doc["symbol_ids"], json({3, 7, -1}));
  // Without merging, ids up to 12 need a 13-symbol alphabet.
  r = Exec(absl::StrCat("estimate --corpus ", Data("clicks.txt"),
                        " --max-alphabet 8 --out ", Path("m.json")));
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("--top-k"), std::string::npos);
}

TEST_F(CliTest, EstimateErrors) {
  Write("empty.txt", "");
  CmdResult r = Exec(absl::StrCat("estimate --corpus ", Path("empty.txt"), " --out ",
                            Path("m.json")));
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("empty corpus"), std::string::npos);
  Write("bad.txt", "0 1\n1 zz\n");
  r = Exec(absl::StrCat("estimate --corpus ", Path("bad.txt"), " --out ",
                        Path("m.json")));
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

TEST_F(CliTest, SynthCasesAndDeterminism) {
  for (const char* model : {"case1", "case2"}) {
    CmdResult a = Exec(absl::StrCat("synth --model ", model, " --length 7 --count 4 --seed 3 --out ",
                              Path("a.txt")));
    CmdResult b = Exec(absl::StrCat("synth --model ", Data(absl::StrCat(model, ".json")),
                              " --length 7 --count 4 --seed 3 --out ", Path("b.txt")));
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(Read("a.txt"), Read("b.txt"));
    std::vector<std::string> lines =
        absl::StrSplit(Read("a.txt"), '\n', absl::SkipEmpty());
    ASSERT_EQ(lines.size(), 4u);
    EXPECT_EQ(std::vector<std::string>(absl::StrSplit(lines[0], ' ')).size(), 7u);
  }
  CmdResult zero = Exec(absl::StrCat("synth --model case1 --length 5 --count 0 --out ",
                               Path("z.txt")));
  EXPECT_EQ(zero.code, 0);
  EXPECT_EQ(Read("z.txt"), "");
}

TEST_F(CliTest, PrivatizeReportAndDeterminism) {
  ASSERT_EQ(Exec(absl::StrCat("synth --model case2 --length 100 --count 20 --out ",
                              Path("in.txt")))
                .code,
            0);
  const std::string base = absl::StrCat("privatize --input ", Path("in.txt"),
                                        " --model case2 --epsilon-total 10 --seed 9");
  CmdResult a = Exec(absl::StrCat(base, " --out ", Path("a.txt")));
  CmdResult b = Exec(absl::StrCat(base, " --out ", Path("b.txt")));
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(Read("a.txt"), Read("b.txt"));
  EXPECT_NE(Read("a.txt"), Read("in.txt"));
  json report = json::parse(Read("a.txt.report.json"));
  EXPECT_EQ(report["horizon"], 100);
  EXPECT_EQ(report["streams"], 20);
  for (const json& e : report["epsilon_per_step"]) {
    EXPECT_NEAR(e.get<double>(), 0.1, 1e-15);
  }
  EXPECT_NEAR(report["linear_total"].get<double>(), 10.0, 1e-9);
  const double advanced = 100 * 0.1 * std::expm1(0.1) +
                          10 * 0.1 * std::sqrt(2 * std::log(1e5));
  EXPECT_NEAR(report["advanced_total"].get<double>(), advanced, 1e-9);
  EXPECT_EQ(report["config"]["mechanism"], "sip-inst");
}

TEST_F(CliTest, PrivatizeBatchedShrinksFinalBatch) {
  Write("in.txt", "0 1 1 0 1\n1 1 1\n");
  CmdResult r = Exec(absl::StrCat("privatize --input ", Path("in.txt"),
                            " --model case2 --mechanism sip-batch --width 2 "
                            "--epsilon-total 5 --out ",
                            Path("o.txt"), " --trace ", Path("t.csv")));
  ASSERT_EQ(r.code, 0) << r.err;
  json report = json::parse(Read("o.txt.report.json"));
  EXPECT_EQ(report["final_batch_shrunk"], true);
  ASSERT_EQ(report["batches"].size(), 3u);
  EXPECT_EQ(report["batches"][2]["width"], 1);
  EXPECT_NEAR(report["batches"][0]["epsilon"].get<double>(), 2.0, 1e-12);
  std::vector<std::string> lines =
      absl::StrSplit(Read("o.txt"), '\n', absl::SkipEmpty());
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(std::vector<std::string>(absl::StrSplit(lines[1], ' ')).size(), 3u);
  // The exact solver used for small batches logs one row per batch.
  CsvDocument trace = ParseCsv(Read("t.csv")).value();
  EXPECT_EQ(trace.header[0], "batch");
  EXPECT_EQ(trace.rows.size(), 3u);
  r = Exec(absl::StrCat("privatize --input ", Path("in.txt"),
                        " --model case2 --mechanism sip-batch --solver first-order "
                        "--epsilon-total 5 --out ",
                        Path("f.txt"), " --trace ", Path("f.csv")));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_GT(ParseCsv(Read("f.csv"))->rows.size(), 3u);
  r = Exec(absl::StrCat("privatize --input ", Path("in.txt"),
                        " --model case2 --mechanism sip-batch --solver newton --out ",
                        Path("g.txt")));
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("newton"), std::string::npos);
}

TEST_F(CliTest, PrivatizeErrors) {
  Write("in.txt", "0 1 1 0\n");
  const std::string in = absl::StrCat("privatize --input ", Path("in.txt"), " --out ",
                                      Path("o.txt"));
  CmdResult r = Exec(absl::StrCat(in, " --model case1 --schedule 0.1,0.2 --horizon 4"));
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("schedule"), std::string::npos);
  r = Exec(absl::StrCat(in, " --model case1 --corpus ", Path("in.txt")));
  EXPECT_EQ(r.code, kExitError);
  r = Exec(in);
  EXPECT_EQ(r.code, kExitError);
  r = Exec(absl::StrCat(in, " --model case1 --mechanism magic"));
  EXPECT_EQ(r.code, kExitError);
  // Estimating the model from a corpus works in place of --model.
  r = Exec(absl::StrCat(in, " --corpus ", Data("alternating.txt"), " --smoothing 1"));
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST_F(CliTest, AuditCrrWithinBudget) {
  CmdResult r = Exec(absl::StrCat("audit --model ", Data("case2.json"),
                            " --epsilon 0.3 --horizon 4 --csv ", Path("a.csv")));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  json report = json::parse(r.out);
  EXPECT_EQ(report["method"], "exact");
  EXPECT_LE(report["sil"].get<double>(), 1.2 + 1e-9);
  CsvDocument csv = ParseCsv(Read("a.csv")).value();
  EXPECT_EQ(csv.header, (std::vector<std::string>{"step", "epsilon", "iil"}));
  EXPECT_EQ(csv.rows.size(), 4u);
  EXPECT_EQ(csv.metadata["command"], "audit");
}

TEST_F(CliTest, AuditRrLdpAttainsItsBound) {
  CmdResult r = Exec("audit --model case1 --mechanism rr-ldp --epsilon 0.7 --horizon 1");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NEAR(json::parse(r.out)["ldp_log_ratio"].get<double>(), 0.7, 1e-12);
  // A total of 10 over four steps audits to an LDP log-ratio of 10.
  r = Exec("audit --model case2 --mechanism rr-ldp --epsilon 2.5 --horizon 4");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NEAR(json::parse(r.out)["ldp_log_ratio"].get<double>(), 10.0, 1e-9);
}

TEST_F(CliTest, AuditBatched) {
  CmdResult r = Exec("audit --model case2 --mechanism sip-batch --width 2 --epsilon 0.5 "
               "--horizon 4");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  json report = json::parse(r.out);
  EXPECT_EQ(report["horizon"], 2);
  EXPECT_LE(report["sil"].get<double>(), 2.0 + 1e-9);
  r = Exec("audit --model case2 --mechanism sip-batch --width 2 --horizon 3");
  EXPECT_EQ(r.code, kExitError);
}

TEST_F(CliTest, AuditGatesOnViolations) {
  Write("identity.json",
        R"({"kind": "custom", "epsilon": 0.3, "kernel": [[1, 0], [0, 1]]})");
  CmdResult r = Exec(absl::StrCat("audit --model case2 --policy ", Path("identity.json"),
                            " --horizon 3"));
  EXPECT_EQ(r.code, kExitViolation);
  EXPECT_EQ(json::parse(r.out)["sil"], "inf");
  EXPECT_NE(r.err.find("violation"), std::string::npos);
  // One row scaled by 1.5 is rejected before any auditing.
  Write("corrupt.json",
        R"({"kind": "crr", "epsilon": 0.3, "kernel": [[1.2, 0.3], [0.4, 0.6]]})");
  r = Exec(absl::StrCat("audit --model case2 --policy ", Path("corrupt.json"),
                        " --horizon 3"));
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("kernel"), std::string::npos);
  EXPECT_EQ(r.out, "");
  // Uniform rows leak nothing and pass at any budget.
  Write("uniform.json",
        R"({"kind": "custom", "epsilon": 0.0, "kernel": [[0.5, 0.5], [0.5, 0.5]]})");
  r = Exec(absl::StrCat("audit --model case2 --policy ", Path("uniform.json"),
                        " --horizon 3 --dump-policy ", Path("dump.json")));
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(json::parse(Read("dump.json"))["kind"], "custom");
}

TEST_F(CliTest, AuditEnumerationBudget) {
  CmdResult r = Exec("audit --model case1 --epsilon 0.1 --horizon 21");
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("--monte-carlo"), std::string::npos);
  r = Exec("audit --model case1 --epsilon 0.1 --horizon 21 --monte-carlo --samples 500");
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(json::parse(r.out)["method"], "monte_carlo");
}

TEST_F(CliTest, SweepRowsAndRoundTrip) {
  CmdResult r = Exec(absl::StrCat("sweep --model case2 --epsilons 0.5,2 --horizon 4 "
                            "--samples 400 --out ",
                            Path("s.csv")));
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string text = Read("s.csv");
  CsvDocument doc = ParseCsv(text).value();
  EXPECT_EQ(doc.header,
            (std::vector<std::string>{"epsilon", "epsilon_total", "mechanism",
                                      "distortion_mean", "distortion_stderr",
                                      "leakage", "leakage_method"}));
  ASSERT_EQ(doc.rows.size(), 8u);
  EXPECT_EQ(doc.metadata["samples"], "400");
  for (const auto& row : doc.rows) {
    EXPECT_EQ(row[6], "exact");
    // Numbers survive a print and re-parse unchanged.
    for (int c : {0, 1, 3, 4, 5}) {
      EXPECT_EQ(FormatNumber(std::stod(row[c])), row[c]);
    }
  }
  // Re-serializing the parsed document reproduces the file.
  std::string again = absl::StrCat("# ", doc.metadata.dump(), "\n",
                                   absl::StrJoin(doc.header, ","), "\n");
  for (const auto& row : doc.rows) absl::StrAppend(&again, absl::StrJoin(row, ","), "\n");
  EXPECT_EQ(again, text);
}

TEST_F(CliTest, SweepSinglePointAndUnavailableBatching) {
  CmdResult r = Exec(absl::StrCat("sweep --model case2 --epsilons 1 --mechanisms sip-batch "
                            "--horizon 3 --samples 100 --out ",
                            Path("s.csv")));
  ASSERT_EQ(r.code, 0) << r.err;
  CsvDocument doc = ParseCsv(Read("s.csv")).value();
  ASSERT_EQ(doc.rows.size(), 1u);
  EXPECT_EQ(doc.rows[0][5], "nan");
  EXPECT_EQ(doc.rows[0][6], "unavailable");
}

TEST_F(CliTest, SweepIsDeterministicAcrossThreadCounts) {
  const std::string args =
      "sweep --model case2 --epsilons 1 --mechanisms sip-inst,rr-ldp --horizon 5 "
      "--samples 300 --seed 4";
  ASSERT_EQ(Exec(absl::StrCat(args, " --out ", Path("a.csv"))).code, 0);
  ASSERT_EQ(Exec(absl::StrCat(args, " --threads 3 --out ", Path("b.csv"))).code, 0);
  CsvDocument a = ParseCsv(Read("a.csv")).value();
  CsvDocument b = ParseCsv(Read("b.csv")).value();
  EXPECT_EQ(a.rows, b.rows);
}

TEST_F(CliTest, Example2Curves) {
  CmdResult r = Exec(absl::StrCat("example2 --p1 0.95 --points 3 --resolution 101 --out ",
                            Path("e.csv")));
  ASSERT_EQ(r.code, 0) << r.err;
  CsvDocument doc = ParseCsv(Read("e.csv")).value();
  ASSERT_EQ(doc.rows.size(), 3u);
  EXPECT_EQ(doc.rows[1][0], "0.5");
  EXPECT_EQ(doc.metadata["p1"], "0.95");
  EXPECT_EQ(doc.metadata["eps1"], "1");
  r = Exec(absl::StrCat("example2 --phis 0.5 --resolution 101 --out ", Path("one.csv")));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(ParseCsv(Read("one.csv"))->rows.size(), 1u);
}

TEST_F(CliTest, ConfigFileWithFlagOverrides) {
  Write("run.json", R"({"command": "synth", "model": "case2", "length": 6,
                        "count": 3, "seed": 5})");
  CmdResult a = Exec(absl::StrCat("synth --config ", Path("run.json"), " --out ", Path("a.txt")));
  ASSERT_EQ(a.code, 0) << a.err;
  CmdResult b = Exec(absl::StrCat("synth --model case2 --length 6 --count 3 --seed 5 --out ",
                            Path("b.txt")));
  EXPECT_EQ(Read("a.txt"), Read("b.txt"));
  CmdResult c = Exec(absl::StrCat("synth --config=", Path("run.json"), " --count 1 --out ",
                            Path("c.txt")));
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(std::vector<std::string>(
                absl::StrSplit(Read("c.txt"), '\n', absl::SkipEmpty()))
                .size(),
            1u);
  CmdResult missing = Exec("synth --config /nonexistent.json --out x");
  EXPECT_EQ(missing.code, kExitError);
}

TEST_F(CliTest, ResolvedConfigFeedsBack) {
  ASSERT_EQ(Exec(absl::StrCat("example2 --points 2 --resolution 101 --eps2 0.5 --out ",
                              Path("e.csv")))
                .code,
            0);
  CsvDocument first = ParseCsv(Read("e.csv")).value();
  Write("cfg.json", first.metadata.dump());
  ASSERT_EQ(Exec(absl::StrCat("example2 --config ", Path("cfg.json"), " --out ",
                              Path("f.csv")))
                .code,
            0);
  CsvDocument second = ParseCsv(Read("f.csv")).value();
  EXPECT_EQ(first.rows, second.rows);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_NE(Call({}).code, 0);
  EXPECT_NE(Call({"frobnicate"}).code, 0);
  EXPECT_NE(Call({"synth", "--model", "case1"}).code, 0);
  CmdResult help = Call({"audit", "--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("--monte-carlo"), std::string::npos);
}

TEST_F(CliTest, InterruptStopsBetweenRows) {
  SetInterrupted(true);
  CmdResult r = Call({"synth", "--model", "case1", "--length", "3", "--count", "5",
                "--out", Path("i.txt")});
  SetInterrupted(false);
  EXPECT_EQ(r.code, kExitInterrupted);
  EXPECT_EQ(Read("i.txt"), "");
}

TEST(ConfigTest, ListsAndExpansion) {
  EXPECT_EQ(ParseDoubleList(" 0.5, 1 ,2").value(), (std::vector<double>{0.5, 1, 2}));
  EXPECT_FALSE(ParseDoubleList("1,x").ok());
  EXPECT_EQ(ParseIntList("3,4").value(), (std::vector<int>{3, 4}));
  const std::string path = ::testing::TempDir() + "/sip_cfg_expand.json";
  ASSERT_TRUE(WriteTextFile(path, R"({"monte-carlo": true, "csv": null,
      "buckets": [0, 0, 1], "epsilon": 0.3, "tolerance": false})")
                  .ok());
  std::vector<std::string> args =
      ExpandConfig({"sip", "audit", "--config", path, "--epsilon", "1"}).value();
  EXPECT_EQ(args, (std::vector<std::string>{"sip", "audit", "--buckets", "0,0,1",
                                            "--epsilon", "0.3", "--monte-carlo",
                                            "--epsilon", "1"}));
  EXPECT_FALSE(ExpandConfig({"sip", "audit", "--config"}).ok());
}

TEST(CsvTest, ParseRejectsRaggedRows) {
  EXPECT_FALSE(ParseCsv("# {}\na,b\n1\n").ok());
  EXPECT_EQ(FormatNumber(1.0 / 0.0), "inf");
  EXPECT_EQ(FormatNumber(0.1), "0.10000000000000001");
}

}  // namespace
}  // namespace sip
