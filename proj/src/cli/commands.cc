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

#include "sip/cli/commands.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "sip/audit/distortion.h"
#include "sip/audit/leakage.h"
#include "sip/audit/parallel.h"
#include "sip/cli/config.h"
#include "sip/cli/csv.h"
#include "sip/example2/two_step.h"
#include "sip/mech/budget.h"
#include "sip/mech/stream.h"
#include "sip/model/estimate.h"
#include "sip/model/io.h"
#include "sip/optimize/batched.h"

namespace sip {
namespace {

using json = nlohmann::json;

struct CommonOptions {
  uint64_t seed = 1;
  std::string out;
  int threads = 1;
};

void AddCommon(CLI::App* sub, CommonOptions& common, bool out_required) {
  sub->add_option("--seed", common.seed, "Random seed");
  CLI::Option* out = sub->add_option(
      "--out", common.out, out_required ? "Output path" : "Output path (default: stdout)");
  if (out_required) out->required();
  sub->add_option("--threads", common.threads,
                  "Worker threads (0: one per hardware thread)")
      ->check(CLI::NonNegativeNumber);
  // Consumed by ExpandConfig before parsing; listed here for --help.
  sub->add_option("--config", "Flat JSON file of option values");
}

// Every option of `sub` with its effective value, for metadata lines.
json ResolvedConfig(const CLI::App* sub) {
  json doc;
  doc["command"] = sub->get_name();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config" || name.empty()) continue;
    if (opt->get_expected_max() == 0) {
      doc[name] = opt->count() > 0;
    } else if (!opt->results().empty()) {
      doc[name] = opt->results().back();
    } else {
      doc[name] = opt->get_default_str();
    }
  }
  return doc;
}

absl::StatusOr<MarkovModel> LoadModel(const std::string& name) {
  if (name == "case1") return MarkovModel::BinarySymmetric(0.5, 0.5);
  if (name == "case2") return MarkovModel::BinarySymmetric(0.9, 0.9);
  return ReadModelFile(name);
}

enum class MechKind { kSipInst, kSipBatch, kRrLdp };

absl::StatusOr<MechKind> ParseMech(const std::string& name) {
  if (name == "sip-inst") return MechKind::kSipInst;
  if (name == "sip-batch") return MechKind::kSipBatch;
  if (name == "rr-ldp") return MechKind::kRrLdp;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown mechanism '", name, "' (sip-inst, sip-batch, rr-ldp)"));
}

// Per-step budgets: an explicit list, or `total` split over `horizon`.
absl::StatusOr<std::vector<double>> BuildSchedule(const std::string& list,
                                                  double total, int horizon) {
  if (!list.empty()) {
    absl::StatusOr<std::vector<double>> schedule = ParseDoubleList(list);
    if (!schedule.ok()) return schedule.status();
    if (static_cast<int>(schedule->size()) != horizon) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "budget schedule has %d entries but the horizon is %d",
          schedule->size(), horizon));
    }
    absl::StatusOr<PrivacyBudget> budget = PrivacyBudget::FromSchedule(*schedule);
    if (!budget.ok()) return budget.status();
    return budget->schedule();
  }
  absl::StatusOr<PrivacyBudget> budget = PrivacyBudget::Uniform(total, horizon);
  if (!budget.ok()) return budget.status();
  return budget->schedule();
}

struct UtilityOptions {
  std::string distance = "hamming";
  std::string buckets;
  std::string solver = "auto";
};

void AddUtility(CLI::App* sub, UtilityOptions& u) {
  sub->add_option("--distance", u.distance,
                  "hamming, absolute, squared or indicator-bucket");
  sub->add_option("--buckets", u.buckets,
                  "Comma-separated bucket of each symbol (default identity)");
  sub->add_option("--solver", u.solver,
                  "Batch kernel solver for sip-batch: auto, first-order or exact");
}

absl::StatusOr<BatchedOptions> MakeBatchedOptions(const UtilityOptions& u,
                                                  int width) {
  BatchedOptions options;
  options.width = width;
  absl::StatusOr<DistanceKind> kind = ParseDistanceKind(u.distance);
  if (!kind.ok()) return kind.status();
  options.distance = *kind;
  absl::StatusOr<SolverBackend> backend = ParseSolverBackend(u.solver);
  if (!backend.ok()) return backend.status();
  options.backend = *backend;
  if (!u.buckets.empty()) {
    absl::StatusOr<std::vector<int>> buckets = ParseIntList(u.buckets);
    if (!buckets.ok()) return buckets.status();
    options.query.bucket = *std::move(buckets);
  }
  return options;
}

// A mechanism plus the model it is audited against: the base model, or
// the composite batch model for batched release.
struct BuiltMechanism {
  std::unique_ptr<StreamMechanism> mech;
  std::optional<MarkovModel> audit_model;
  int audit_horizon = 0;
  const BatchedMechanism* batched = nullptr;
};

absl::StatusOr<BuiltMechanism> BuildMechanism(MechKind kind,
                                              const MarkovModel& model,
                                              std::vector<double> schedule,
                                              const BatchedOptions& options) {
  BuiltMechanism built;
  const int horizon = static_cast<int>(schedule.size());
  built.audit_model = model;
  built.audit_horizon = horizon;
  switch (kind) {
    case MechKind::kSipInst: {
      absl::StatusOr<CrrMechanism> m =
          CrrMechanism::Create(model.alphabet_size(), std::move(schedule));
      if (!m.ok()) return m.status();
      built.mech = std::make_unique<CrrMechanism>(*std::move(m));
      break;
    }
    case MechKind::kRrLdp: {
      absl::StatusOr<RrLdpMechanism> m =
          RrLdpMechanism::Create(model.alphabet_size(), std::move(schedule));
      if (!m.ok()) return m.status();
      built.mech = std::make_unique<RrLdpMechanism>(*std::move(m));
      break;
    }
    case MechKind::kSipBatch: {
      absl::StatusOr<BatchedMechanism> m =
          BatchedMechanism::Create(model, std::move(schedule), options);
      if (!m.ok()) return m.status();
      auto owned = std::make_unique<BatchedMechanism>(*std::move(m));
      built.batched = owned.get();
      if (horizon % options.width == 0) {
        built.audit_model = owned->ModelForWidth(options.width).AsCompositeModel();
        built.audit_horizon = horizon / options.width;
      } else {
        built.audit_model.reset();
      }
      built.mech = std::move(owned);
      break;
    }
  }
  return built;
}

Releaser MakeReleaser(const MarkovModel& model, const BuiltMechanism& built) {
  if (built.batched != nullptr) {
    const BatchedMechanism* mech = built.batched;
    return [mech](std::span<const int> input, StreamRng& rng) {
      return PrivatizeBatchedStream(*mech, input, rng);
    };
  }
  return StreamReleaser(model, *built.mech);
}

bool WithinEnumeration(const MarkovModel& model, int horizon) {
  return std::pow(static_cast<double>(model.alphabet_size()), horizon) <=
         kEnumerationBudget;
}

int Fail(std::ostream& err, const absl::Status& status) {
  if (absl::IsCancelled(status)) {
    err << "interrupted\n";
    return kExitInterrupted;
  }
  err << "error: " << status.message() << "\n";
  return kExitError;
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string corpus;
  double smoothing = 0.0;
  int top_k = 0;
  int max_alphabet = 4096;
};

absl::Status RunEstimate(const EstimateArgs& a, const CommonOptions& common,
                         std::ostream& out) {
  absl::StatusOr<Corpus> corpus = ReadCorpusFile(a.corpus);
  if (!corpus.ok()) return corpus.status();
  EstimateOptions options;
  options.smoothing = a.smoothing;
  std::vector<int> symbol_ids;
  const Corpus* data = &*corpus;
  std::optional<TopKResult> top;
  if (a.top_k > 0) {
    absl::StatusOr<TopKResult> mapped = ApplyTopK(*corpus, a.top_k);
    if (!mapped.ok()) return mapped.status();
    top = *std::move(mapped);
    data = &top->corpus;
    symbol_ids = top->kept_ids;
    symbol_ids.push_back(-1);  // the merged "other" bucket
    options.alphabet_size = static_cast<int>(symbol_ids.size());
  } else {
    int largest = -1;
    for (const Sequence& seq : *corpus) {
      for (int x : seq) largest = std::max(largest, x);
    }
    if (largest + 1 > a.max_alphabet) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "corpus uses %d symbol ids, more than --max-alphabet %d; pass "
          "--top-k to merge rare symbols",
          largest + 1, a.max_alphabet));
    }
  }
  absl::StatusOr<MarkovModel> model = EstimateMarkov(*data, options);
  if (!model.ok()) return model.status();
  if (absl::Status s = WriteModelFile(common.out, *model, symbol_ids); !s.ok()) {
    return s;
  }
  size_t shortest = SIZE_MAX;
  size_t longest = 0;
  int sequences = 0;
  for (const Sequence& seq : *data) {
    if (seq.empty()) continue;
    ++sequences;
    shortest = std::min(shortest, seq.size());
    longest = std::max(longest, seq.size());
  }
  out << absl::StrFormat(
      "alphabet_size=%d sequences=%d min_length=%d max_length=%d\n",
      model->alphabet_size(), sequences, sequences > 0 ? shortest : 0,
      longest);
  return absl::OkStatus();
}

// ------------------------------------------------------------------- synth

struct SynthArgs {
  std::string model;
  int length = 100;
  int count = 1;
};

absl::Status RunSynth(const SynthArgs& a, const CommonOptions& common) {
  absl::StatusOr<MarkovModel> model = LoadModel(a.model);
  if (!model.ok()) return model.status();
  absl::StatusOr<LineWriter> out = LineWriter::Open(common.out);
  if (!out.ok()) return out.status();
  for (int i = 0; i < a.count; ++i) {
    if (Interrupted()) return absl::CancelledError("interrupted");
    StreamRng rng(common.seed, static_cast<uint64_t>(i));
    std::vector<int> seq = SampleSequence(*model, a.length, rng);
    if (absl::Status s = out->Write(FormatSequence(seq)); !s.ok()) return s;
  }
  return out->Close();
}

// --------------------------------------------------------------- privatize

struct PrivatizeArgs {
  std::string input;
  std::string model;
  std::string corpus;
  double smoothing = 0.0;
  std::string mechanism = "sip-inst";
  double epsilon_total = 10.0;
  std::string schedule;
  int horizon = 0;
  double delta = 1e-5;
  int width = 2;
  UtilityOptions utility;
  std::string report;
  std::string trace;
};

json Totals(std::span<const double> units, double delta) {
  json doc;
  absl::StatusOr<double> linear = ComposeLinear(units);
  doc["linear_total"] = linear.ok() ? *linear : 0.0;
  doc["delta"] = delta;
  absl::StatusOr<double> advanced = ComposeAdvanced(units, delta);
  const double largest =
      units.empty() ? 0.0 : *std::max_element(units.begin(), units.end());
  absl::StatusOr<double> advanced_linear = ComposeAdvancedLinear(
      largest, static_cast<int>(units.size()), delta);
  doc["advanced_total"] = advanced.ok() ? json(*advanced) : json(nullptr);
  doc["advanced_total_linear"] =
      advanced_linear.ok() ? json(*advanced_linear) : json(nullptr);
  return doc;
}

absl::Status RunPrivatize(const PrivatizeArgs& a, const CommonOptions& common,
                          const json& config, std::ostream& out) {
  if (a.model.empty() == a.corpus.empty()) {
    return absl::InvalidArgumentError(
        "supply exactly one of --model and --corpus");
  }
  absl::StatusOr<MechKind> kind = ParseMech(a.mechanism);
  if (!kind.ok()) return kind.status();
  absl::StatusOr<Corpus> input = ReadCorpusFile(a.input);
  if (!input.ok()) return input.status();
  absl::StatusOr<MarkovModel> model;
  if (!a.model.empty()) {
    model = LoadModel(a.model);
  } else {
    absl::StatusOr<Corpus> corpus = ReadCorpusFile(a.corpus);
    if (!corpus.ok()) return corpus.status();
    EstimateOptions options;
    options.smoothing = a.smoothing;
    model = EstimateMarkov(*corpus, options);
  }
  if (!model.ok()) return model.status();

  size_t longest = 0;
  for (const Sequence& seq : *input) longest = std::max(longest, seq.size());
  int horizon = a.horizon;
  if (horizon == 0) {
    horizon = !a.schedule.empty()
                  ? static_cast<int>(ParseDoubleList(a.schedule)
                                         .value_or(std::vector<double>{})
                                         .size())
                  : static_cast<int>(longest);
  }
  if (horizon < 1) return absl::InvalidArgumentError("horizon must be >= 1");
  if (static_cast<int>(longest) > horizon) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "input has a sequence of length %d, longer than the horizon %d",
        longest, horizon));
  }
  absl::StatusOr<std::vector<double>> schedule =
      BuildSchedule(a.schedule, a.epsilon_total, horizon);
  if (!schedule.ok()) return schedule.status();
  absl::StatusOr<BatchedOptions> batch_options =
      MakeBatchedOptions(a.utility, a.width);
  if (!batch_options.ok()) return batch_options.status();
  absl::StatusOr<BuiltMechanism> built =
      BuildMechanism(*kind, *model, *schedule, *batch_options);
  if (!built.ok()) return built.status();
  std::optional<BatchedMechanism> traced;
  if (built->batched != nullptr && !a.trace.empty()) {
    BatchedOptions with_trace = *batch_options;
    with_trace.solver.record_trace = true;
    absl::StatusOr<BatchedMechanism> m =
        BatchedMechanism::Create(*model, *schedule, with_trace);
    if (!m.ok()) return m.status();
    traced = *std::move(m);
  }

  absl::StatusOr<LineWriter> writer = LineWriter::Open(common.out);
  if (!writer.ok()) return writer.status();
  int solves = 0;
  int converged = 0;
  std::vector<SolveResult> first_stream;
  int64_t symbols = 0;
  for (size_t i = 0; i < input->size(); ++i) {
    if (Interrupted()) return absl::CancelledError("interrupted");
    const Sequence& seq = (*input)[i];
    StreamRng rng(common.seed, i);
    absl::StatusOr<std::vector<int>> released;
    if (built->batched != nullptr) {
      std::vector<SolveResult> results;
      const BatchedMechanism& mech =
          i == 0 && traced.has_value() ? *traced : *built->batched;
      released = PrivatizeBatchedStream(mech, seq, rng, &results);
      for (const SolveResult& r : results) converged += r.converged;
      solves += static_cast<int>(results.size());
      if (i == 0) first_stream = std::move(results);
    } else {
      released = PrivatizeStream(*model, *built->mech, seq, rng);
    }
    if (!released.ok()) {
      return absl::Status(released.status().code(),
                          absl::StrFormat("sequence %d: %s", i + 1,
                                          released.status().message()));
    }
    symbols += static_cast<int64_t>(released->size());
    if (absl::Status s = writer->Write(FormatSequence(*released)); !s.ok()) {
      return s;
    }
  }
  if (absl::Status s = writer->Close(); !s.ok()) return s;

  json report;
  report["config"] = config;
  report["mechanism"] = a.mechanism;
  report["horizon"] = horizon;
  report["streams"] = input->size();
  report["symbols"] = symbols;
  report["epsilon_per_step"] = *schedule;
  if (built->batched != nullptr) {
    const BatchedMechanism& mech = *built->batched;
    json batches = json::array();
    for (int b = 0; b < mech.num_steps(); ++b) {
      batches.push_back({{"start", b * a.width},
                         {"width", mech.BatchWidth(b)},
                         {"epsilon", mech.EpsilonAt(b)}});
    }
    report["width"] = a.width;
    report["batches"] = batches;
    report["final_batch_shrunk"] = horizon % a.width != 0;
    report["solver"] = {{"solves", solves}, {"converged", converged}};
    // Batches are the release units for advanced composition.
    report["accounting"] = Totals(mech.batch_epsilons(), a.delta);
  } else {
    report["accounting"] = Totals(*schedule, a.delta);
  }
  report["linear_total"] = report["accounting"]["linear_total"];
  report["advanced_total"] = report["accounting"]["advanced_total"];
  report["advanced_total_linear"] =
      report["accounting"]["advanced_total_linear"];

  std::string report_path = a.report;
  if (report_path.empty() && common.out != "-") {
    report_path = common.out + ".report.json";
  }
  if (!report_path.empty()) {
    if (absl::Status s = WriteTextFile(report_path, report.dump(2) + "\n");
        !s.ok()) {
      return s;
    }
  }
  if (!a.trace.empty()) {
    absl::StatusOr<CsvWriter> csv = CsvWriter::Open(
        a.trace, config,
        {"batch", "iteration", "objective", "max_ratio", "min_ratio",
         "lower_bound", "active"});
    if (!csv.ok()) return csv.status();
    for (size_t b = 0; b < first_stream.size(); ++b) {
      for (const SolverTraceRow& row : first_stream[b].trace) {
        absl::Status s = csv->WriteRow(
            {absl::StrCat(b + 1), absl::StrCat(row.iteration),
             FormatNumber(row.objective), FormatNumber(row.max_ratio),
             FormatNumber(row.min_ratio), FormatNumber(row.lower_bound),
             absl::StrCat(row.active)});
        if (!s.ok()) return s;
      }
    }
    if (absl::Status s = csv->Close(); !s.ok()) return s;
  }
  if (common.out != "-") {
    out << absl::StrFormat("streams=%d symbols=%d linear_total=%.17g\n",
                           input->size(), symbols,
                           report["linear_total"].get<double>());
  }
  return absl::OkStatus();
}

// ------------------------------------------------------------------- sweep

struct SweepArgs {
  std::string model;
  std::string mechanisms = "sip-inst,rr-ldp,rr-ldp-2x,sip-batch";
  std::string epsilons = "0.5,1,2,3";
  int horizon = 10;
  int samples = 2000;
  int audit_samples = 10000;
  int width = 2;
  UtilityOptions utility;
};

absl::Status RunSweep(const SweepArgs& a, const CommonOptions& common,
                      const json& config) {
  absl::StatusOr<MarkovModel> model = LoadModel(a.model);
  if (!model.ok()) return model.status();
  absl::StatusOr<std::vector<double>> grid = ParseDoubleList(a.epsilons);
  if (!grid.ok()) return grid.status();
  if (grid->empty()) return absl::InvalidArgumentError("epsilon grid is empty");
  std::vector<std::string> names;
  for (absl::string_view part : absl::StrSplit(a.mechanisms, ',')) {
    if (!part.empty()) names.emplace_back(part);
  }
  if (names.empty()) return absl::InvalidArgumentError("no mechanisms given");
  absl::StatusOr<BatchedOptions> batch_options =
      MakeBatchedOptions(a.utility, a.width);
  if (!batch_options.ok()) return batch_options.status();
  absl::StatusOr<Matrix> symbol_distance =
      BatchDistanceMatrix(model->alphabet_size(), 1, batch_options->distance,
                          batch_options->query);
  if (!symbol_distance.ok()) return symbol_distance.status();

  absl::StatusOr<CsvWriter> csv = CsvWriter::Open(
      common.out, config,
      {"epsilon", "epsilon_total", "mechanism", "distortion_mean",
       "distortion_stderr", "leakage", "leakage_method"});
  if (!csv.ok()) return csv.status();
  for (double eps : *grid) {
    for (const std::string& name : names) {
      double factor = 1.0;
      std::string base = name;
      if (name == "rr-ldp-2x") {
        base = "rr-ldp";
        factor = 2.0;
      }
      absl::StatusOr<MechKind> kind = ParseMech(base);
      if (!kind.ok()) return kind.status();
      std::vector<double> schedule(a.horizon, factor * eps);
      absl::StatusOr<BuiltMechanism> built =
          BuildMechanism(*kind, *model, schedule, *batch_options);
      if (!built.ok()) return built.status();
      absl::StatusOr<DistortionReport> distortion = MonteCarloDistortion(
          *model, MakeReleaser(*model, *built), *symbol_distance, a.horizon,
          a.samples, common.seed, common.threads);
      if (!distortion.ok()) return distortion.status();

      double leakage = std::nan("");
      std::string method = "unavailable";
      if (built->audit_model.has_value()) {
        AuditOptions options;
        options.pairs = false;
        options.threads = common.threads;
        absl::StatusOr<LeakageReport> report;
        if (WithinEnumeration(*built->audit_model, built->audit_horizon)) {
          report = AuditExact(*built->audit_model, *built->mech,
                              built->audit_horizon, options);
          method = "exact";
        } else {
          report = AuditMonteCarlo(*built->audit_model, *built->mech,
                                   built->audit_horizon, a.audit_samples,
                                   common.seed, options);
          method = "monte_carlo";
        }
        if (!report.ok()) return report.status();
        leakage = report->sil;
      }
      absl::Status s = csv->WriteRow(
          {FormatNumber(eps), FormatNumber(factor * eps * a.horizon), name,
           FormatNumber(distortion->mean),
           FormatNumber(distortion->standard_error), FormatNumber(leakage),
           method});
      if (!s.ok()) return s;
    }
  }
  return csv->Close();
}

// ------------------------------------------------------------------- audit

struct AuditArgs {
  std::string model;
  std::string mechanism = "sip-inst";
  std::string policy;
  double epsilon = 0.3;
  std::string schedule;
  int horizon = 4;
  int width = 2;
  UtilityOptions utility;
  bool monte_carlo = false;
  int samples = 10000;
  double tolerance = 1e-9;
  std::string csv;
  std::string dump_policy;
};

// Returns true when a certified bound is violated; describes each one.
bool FindViolations(const LeakageReport& r, double tol, std::ostream& err) {
  bool violated = false;
  for (size_t k = 0; k < r.iil_per_step.size(); ++k) {
    if (r.iil_per_step[k] > r.epsilon_per_step[k] + tol) {
      err << absl::StrFormat("violation: step %d leakage %.17g > epsilon %.17g\n",
                             k + 1, r.iil_per_step[k], r.epsilon_per_step[k]);
      violated = true;
    }
  }
  const double total = r.EpsilonTotal();
  if (r.sil > total + tol) {
    err << absl::StrFormat("violation: sequence leakage %.17g > %.17g\n", r.sil,
                           total);
    violated = true;
  }
  if (r.ldp_log_ratio > 2.0 * total + tol) {
    err << absl::StrFormat("violation: ldp log-ratio %.17g > %.17g\n",
                           r.ldp_log_ratio, 2.0 * total);
    violated = true;
  }
  return violated;
}

absl::StatusOr<int> RunAudit(const AuditArgs& a, const CommonOptions& common,
                             const json& config, std::ostream& out,
                             std::ostream& err) {
  absl::StatusOr<MarkovModel> model = LoadModel(a.model);
  if (!model.ok()) return model.status();
  if (a.horizon < 1) return absl::InvalidArgumentError("horizon must be >= 1");
  BuiltMechanism built;
  if (!a.policy.empty()) {
    absl::StatusOr<std::string> text = ReadTextFile(a.policy);
    if (!text.ok()) return text.status();
    absl::StatusOr<ReleasePolicy> policy = PolicyFromJson(*text);
    if (!policy.ok()) return policy.status();
    built.mech = std::make_unique<FixedPolicyMechanism>(*std::move(policy),
                                                        a.horizon);
    built.audit_model = *model;
    built.audit_horizon = a.horizon;
  } else {
    absl::StatusOr<MechKind> kind = ParseMech(a.mechanism);
    if (!kind.ok()) return kind.status();
    absl::StatusOr<std::vector<double>> schedule =
        BuildSchedule(a.schedule, a.epsilon * a.horizon, a.horizon);
    if (!schedule.ok()) return schedule.status();
    absl::StatusOr<BatchedOptions> batch_options =
        MakeBatchedOptions(a.utility, a.width);
    if (!batch_options.ok()) return batch_options.status();
    absl::StatusOr<BuiltMechanism> b =
        BuildMechanism(*kind, *model, *schedule, *batch_options);
    if (!b.ok()) return b.status();
    built = *std::move(b);
    if (!built.audit_model.has_value()) {
      return absl::InvalidArgumentError(
          "batched audit needs a horizon divisible by the batch width");
    }
  }
  const MarkovModel& audit_model = *built.audit_model;
  if (!a.dump_policy.empty()) {
    absl::StatusOr<ReleasePolicy> first =
        built.mech->PolicyAt(0, audit_model.prior());
    if (!first.ok()) return first.status();
    if (absl::Status s = WriteTextFile(a.dump_policy, PolicyToJson(*first));
        !s.ok()) {
      return s;
    }
  }
  AuditOptions options;
  options.threads = common.threads;
  absl::StatusOr<LeakageReport> report;
  if (WithinEnumeration(audit_model, built.audit_horizon)) {
    report = AuditExact(audit_model, *built.mech, built.audit_horizon, options);
  } else if (a.monte_carlo) {
    report = AuditMonteCarlo(audit_model, *built.mech, built.audit_horizon,
                             a.samples, common.seed, options);
  } else {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "%d^%d release sequences exceed the enumeration budget; pass "
        "--monte-carlo to sample instead",
        audit_model.alphabet_size(), built.audit_horizon));
  }
  if (!report.ok()) return report.status();

  json doc = json::parse(ReportToJson(*report));
  doc["config"] = config;
  if (common.out.empty() || common.out == "-") {
    out << doc.dump(2) << "\n";
  } else if (absl::Status s = WriteTextFile(common.out, doc.dump(2) + "\n");
             !s.ok()) {
    return s;
  }
  if (!a.csv.empty()) {
    absl::StatusOr<CsvWriter> csv =
        CsvWriter::Open(a.csv, config, {"step", "epsilon", "iil"});
    if (!csv.ok()) return csv.status();
    for (size_t k = 0; k < report->iil_per_step.size(); ++k) {
      absl::Status s = csv->WriteRow({absl::StrCat(k + 1),
                                      FormatNumber(report->epsilon_per_step[k]),
                                      FormatNumber(report->iil_per_step[k])});
      if (!s.ok()) return s;
    }
    if (absl::Status s = csv->Close(); !s.ok()) return s;
  }
  return FindViolations(*report, a.tolerance, err) ? kExitViolation : kExitOk;
}

// ---------------------------------------------------------------- example2

struct Example2Args {
  double p1 = 0.5;
  double eps1 = 1.0;
  double eps2 = 1.0;
  double cap = 0.2;
  int resolution = 1001;
  int points = 101;
  std::string phis;
};

absl::Status RunExample2(const Example2Args& a, const CommonOptions& common,
                         json config) {
  CurveSpec spec;
  spec.p1 = a.p1;
  spec.eps1 = a.eps1;
  spec.eps2 = a.eps2;
  spec.cap = a.cap;
  spec.resolution = a.resolution;
  spec.threads = common.threads;
  if (!a.phis.empty()) {
    absl::StatusOr<std::vector<double>> phis = ParseDoubleList(a.phis);
    if (!phis.ok()) return phis.status();
    spec.phis = *std::move(phis);
  } else {
    spec.phis = PhiGrid(a.points);
  }
  if (spec.phis.empty()) return absl::InvalidArgumentError("empty phi grid");
  absl::StatusOr<CsvWriter> csv = CsvWriter::Open(
      common.out, config,
      {"phi", "rho_x", "rho_n", "mi_noise", "pr_n2", "leak_corr",
       "leak_indep"});
  if (!csv.ok()) return csv.status();
  // Chunks of one phi per worker keep rows flowing to disk.
  const size_t chunk = static_cast<size_t>(ResolveThreads(common.threads));
  for (size_t begin = 0; begin < spec.phis.size(); begin += chunk) {
    if (Interrupted()) return absl::CancelledError("interrupted");
    CurveSpec part = spec;
    part.phis.assign(spec.phis.begin() + begin,
                     spec.phis.begin() + std::min(spec.phis.size(), begin + chunk));
    absl::StatusOr<std::vector<CurveRow>> rows = ComputeCurves(part);
    if (!rows.ok()) return rows.status();
    for (const CurveRow& row : *rows) {
      absl::Status s = csv->WriteRow(
          {FormatNumber(row.phi), FormatNumber(row.rho_x),
           FormatNumber(row.rho_n), FormatNumber(row.mi_noise),
           FormatNumber(row.pr_n2), FormatNumber(row.leak_corr),
           FormatNumber(row.leak_indep)});
      if (!s.ok()) return s;
    }
  }
  return csv->Close();
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  absl::StatusOr<std::vector<std::string>> expanded = ExpandConfig(args);
  if (!expanded.ok()) return Fail(err, expanded.status());

  CLI::App app{"Context-aware private release of correlated symbol streams",
               "sip"};
  app.option_defaults()
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)
      ->always_capture_default();
  app.require_subcommand(1);

  CommonOptions common;

  EstimateArgs est;
  CLI::App* estimate =
      app.add_subcommand("estimate", "Fit a Markov model to a corpus");
  AddCommon(estimate, common, true);
  estimate->add_option("--corpus", est.corpus, "Corpus file")->required();
  estimate->add_option("--smoothing", est.smoothing, "Additive smoothing")
      ->check(CLI::NonNegativeNumber);
  estimate->add_option("--top-k", est.top_k,
                       "Keep the k most frequent symbols, merge the rest")
      ->check(CLI::NonNegativeNumber);
  estimate->add_option("--max-alphabet", est.max_alphabet,
                       "Largest alphabet accepted without --top-k");

  SynthArgs syn;
  CLI::App* synth = app.add_subcommand("synth", "Sample sequences from a model");
  AddCommon(synth, common, true);
  synth->add_option("--model", syn.model, "Model file, or case1 / case2")
      ->required();
  synth->add_option("--length", syn.length, "Sequence length")
      ->check(CLI::PositiveNumber);
  synth->add_option("--count", syn.count, "Number of sequences")
      ->check(CLI::NonNegativeNumber);

  PrivatizeArgs priv;
  CLI::App* privatize =
      app.add_subcommand("privatize", "Release a corpus under a budget");
  AddCommon(privatize, common, true);
  privatize->add_option("--input", priv.input, "Corpus to release")->required();
  privatize->add_option("--model", priv.model, "Model file, or case1 / case2");
  privatize->add_option("--corpus", priv.corpus,
                        "Corpus to estimate the model from");
  privatize->add_option("--smoothing", priv.smoothing,
                        "Smoothing when estimating from --corpus");
  privatize->add_option("--mechanism", priv.mechanism,
                        "sip-inst, sip-batch or rr-ldp");
  privatize->add_option("--epsilon-total", priv.epsilon_total,
                        "Total budget split evenly over the horizon")
      ->check(CLI::NonNegativeNumber);
  privatize->add_option("--schedule", priv.schedule,
                        "Comma-separated per-step budgets");
  privatize->add_option("--horizon", priv.horizon,
                        "Steps per stream (default: longest input)");
  privatize->add_option("--delta", priv.delta,
                        "Failure probability for advanced composition");
  privatize->add_option("--width", priv.width, "Batch width for sip-batch")
      ->check(CLI::PositiveNumber);
  AddUtility(privatize, priv.utility);
  privatize->add_option("--report", priv.report,
                        "Budget report path (default: <out>.report.json)");
  privatize->add_option("--trace", priv.trace,
                        "Solver trace CSV for the first stream (sip-batch)");

  SweepArgs sw;
  CLI::App* sweep =
      app.add_subcommand("sweep", "Distortion and leakage over a budget grid");
  AddCommon(sweep, common, true);
  sweep->add_option("--model", sw.model, "Model file, or case1 / case2")
      ->required();
  sweep->add_option("--mechanisms", sw.mechanisms,
                    "Comma-separated: sip-inst, sip-batch, rr-ldp, rr-ldp-2x");
  sweep->add_option("--epsilons", sw.epsilons, "Per-step budget grid");
  sweep->add_option("--horizon", sw.horizon, "Steps per stream")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--samples", sw.samples, "Streams for distortion")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--audit-samples", sw.audit_samples,
                    "Draws when leakage must be sampled")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--width", sw.width, "Batch width for sip-batch")
      ->check(CLI::PositiveNumber);
  AddUtility(sweep, sw.utility);

  AuditArgs aud;
  CLI::App* audit = app.add_subcommand(
      "audit", "Leakage report; exit status 2 when a bound is violated");
  AddCommon(audit, common, false);
  audit->add_option("--model", aud.model, "Model file, or case1 / case2")
      ->required();
  audit->add_option("--mechanism", aud.mechanism,
                    "sip-inst, sip-batch or rr-ldp");
  audit->add_option("--policy", aud.policy,
                    "Policy JSON applied at every step instead");
  audit->add_option("--epsilon", aud.epsilon, "Per-step budget")
      ->check(CLI::NonNegativeNumber);
  audit->add_option("--schedule", aud.schedule,
                    "Comma-separated per-step budgets");
  audit->add_option("--horizon", aud.horizon, "Steps")
      ->check(CLI::PositiveNumber);
  audit->add_option("--width", aud.width, "Batch width for sip-batch")
      ->check(CLI::PositiveNumber);
  AddUtility(audit, aud.utility);
  audit->add_flag("--monte-carlo", aud.monte_carlo,
                  "Sample when enumeration is too large");
  audit->add_option("--samples", aud.samples, "Monte Carlo draws")
      ->check(CLI::PositiveNumber);
  audit->add_option("--tolerance", aud.tolerance,
                    "Slack allowed before a bound counts as violated");
  audit->add_option("--csv", aud.csv, "Per-step CSV path");
  audit->add_option("--dump-policy", aud.dump_policy,
                    "Write the first-step policy as JSON");

  Example2Args ex;
  CLI::App* example2 = app.add_subcommand(
      "example2", "Two correlated binary releases: noise and leakage curves");
  AddCommon(example2, common, true);
  example2->add_option("--p1", ex.p1, "Pr(X_1 = 1)");
  example2->add_option("--eps1", ex.eps1, "Budget of step 1");
  example2->add_option("--eps2", ex.eps2, "Budget of step 2");
  example2->add_option("--cap", ex.cap, "Upper bound on Pr(N_2 = 1)");
  example2->add_option("--resolution", ex.resolution,
                       "Grid points per step-2 flip probability");
  example2->add_option("--points", ex.points, "Points of the phi grid")
      ->check(CLI::PositiveNumber);
  example2->add_option("--phis", ex.phis, "Explicit comma-separated phi grid");

  std::vector<const char*> argv;
  for (const std::string& s : *expanded) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  InstallInterruptHandler();

  absl::Status status;
  if (estimate->parsed()) {
    status = RunEstimate(est, common, out);
  } else if (synth->parsed()) {
    status = RunSynth(syn, common);
  } else if (privatize->parsed()) {
    status = RunPrivatize(priv, common, ResolvedConfig(privatize), out);
  } else if (sweep->parsed()) {
    status = RunSweep(sw, common, ResolvedConfig(sweep));
  } else if (audit->parsed()) {
    absl::StatusOr<int> code =
        RunAudit(aud, common, ResolvedConfig(audit), out, err);
    if (!code.ok()) return Fail(err, code.status());
    return *code;
  } else if (example2->parsed()) {
    status = RunExample2(ex, common, ResolvedConfig(example2));
  }
  if (!status.ok()) return Fail(err, status);
  return kExitOk;
}

}  // namespace sip
