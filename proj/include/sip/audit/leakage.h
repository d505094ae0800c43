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

#ifndef SIP_AUDIT_LEAKAGE_H_
#define SIP_AUDIT_LEAKAGE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "sip/mech/stream.h"
#include "sip/model/markov.h"
#include "sip/model/prob.h"

namespace sip {

// Exact auditing enumerates release sequences; it is allowed while
// |X|^T stays within this many sequences.
inline constexpr double kEnumerationBudget = 1e6;
// Joint (input, release) enumeration for mutual information and exceedance
// mass is allowed while |X|^(2T) stays within this many pairs.
inline constexpr double kPairBudget = 1e7;

// Leakage of a mechanism over a horizon. Logs are natural; +inf marks a
// release that rules out an input the prior allows.
struct LeakageReport {
  bool exact = true;
  int samples = 0;  // Monte Carlo draws; 0 when exact
  int horizon = 0;
  // Largest |log Pr(x | y) / Pr(x)| over whole sequences. Monte Carlo
  // reports the largest realized value.
  double sil = 0.0;
  // Per step: largest |log Pr(x_k | y_1^k) / Pr(x_k | y_1^(k-1))| over
  // histories with positive probability.
  std::vector<double> iil_per_step;
  // Largest |log Pr(y | x) / Pr(y | x')| over all input pairs.
  double ldp_log_ratio = 0.0;
  // I(X_1^T; Y_1^T) in nats, when computed.
  std::optional<double> mutual_information;
  // Joint mass of pairs whose realized leakage exceeds `threshold`.
  std::optional<double> exceed_mass;
  double threshold = 0.0;
  // Per-step budgets of the audited mechanism.
  std::vector<double> epsilon_per_step;

  double IilSum() const;
  double EpsilonTotal() const;
};

// Largest |log kernel(x, y) / m(y)|, m(y) = sum_x belief(x) kernel(x, y),
// over x with belief(x) > 0 and y with m(y) > 0.
double IilExact(const ProbVec& belief, const Matrix& kernel);
// The same quantity over batches (composite symbols).
double BilExact(const ProbVec& batch_belief, const Matrix& kernel);

struct AuditOptions {
  // Also enumerate (input, release) pairs for mutual information and the
  // exceedance mass when within kPairBudget.
  bool pairs = true;
  // Exceedance threshold; defaults to the mechanism's summed budget.
  std::optional<double> threshold;
  int threads = 1;
};

// Exact audit by enumerating release prefixes with a forward recursion;
// extreme input sequences are found by max/min-product dynamic programming
// over inputs the prior allows. Fails with ResourceExhausted when
// |X|^horizon exceeds kEnumerationBudget.
absl::StatusOr<LeakageReport> AuditExact(const MarkovModel& model,
                                         const StreamMechanism& mech,
                                         int horizon,
                                         const AuditOptions& options = {});
absl::StatusOr<double> SilExact(const MarkovModel& model,
                                const StreamMechanism& mech, int horizon);
absl::StatusOr<double> LdpLogRatio(const MarkovModel& model,
                                   const StreamMechanism& mech, int horizon);

// Samples (input, release) pairs and reports the largest realized values
// of each metric. mutual_information is the sample mean of the realized
// log ratio, an unbiased estimate; exceed_mass is the fraction of samples
// above the threshold.
absl::StatusOr<LeakageReport> AuditMonteCarlo(const MarkovModel& model,
                                              const StreamMechanism& mech,
                                              int horizon, int samples,
                                              uint64_t seed,
                                              const AuditOptions& options = {});

// One node of the release-prefix tree: the state before step `step`
// (0-based), after releases y_1..y_step.
struct HistoryView {
  int step = 0;
  std::span<const int> released;
  // Pr(x_step, y_1..y_(step-1)) for each current input x.
  std::span<const double> joint;
  // Probability of the released prefix.
  double prefix_probability = 1.0;
  // Adversary belief over the current input and the policy used for it.
  const ProbVec* belief = nullptr;
  const ReleasePolicy* policy = nullptr;
};

// Calls `visit` for every release prefix of length < horizon with positive
// probability, depth first with releases in ascending order. Stops at the
// first error from the mechanism or the visitor.
absl::Status VisitHistories(
    const MarkovModel& model, const StreamMechanism& mech, int horizon,
    const std::function<absl::Status(const HistoryView&)>& visit);

std::string ReportToJson(const LeakageReport& report);
// Header plus one row per step.
std::string ReportToCsv(const LeakageReport& report);

}  // namespace sip

#endif  // SIP_AUDIT_LEAKAGE_H_
