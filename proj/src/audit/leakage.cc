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

#include "sip/audit/leakage.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include "absl/strings/str_format.h"
#include "json.hpp"
#include "sip/audit/parallel.h"
#include "sip/belief/belief.h"

namespace sip {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Realized leakage must exceed the threshold by this much to count, so
// that values sitting on the band edge are not flipped by rounding.
constexpr double kExceedSlack = 1e-9;

double SafeLog(double x) { return x > 0.0 ? std::log(x) : -kInf; }

// Largest log ratio between the entries of column y over all inputs.
double ColumnLogSpread(const Matrix& kernel, int y) {
  double hi = 0.0;
  double lo = kInf;
  for (int x = 0; x < kernel.rows(); ++x) {
    hi = std::max(hi, kernel(x, y));
    lo = std::min(lo, kernel(x, y));
  }
  if (hi == 0.0) return 0.0;
  return lo > 0.0 ? std::log(hi / lo) : kInf;
}

// reach[k][x]: some input path x_1..x_k = x has positive prior probability.
std::vector<std::vector<char>> Reachability(const MarkovModel& model,
                                            int horizon) {
  const int n = model.alphabet_size();
  std::vector<std::vector<char>> reach(horizon, std::vector<char>(n, 0));
  for (int x = 0; x < n; ++x) reach[0][x] = model.prior()[x] > 0.0;
  for (int k = 1; k < horizon; ++k) {
    for (int u = 0; u < n; ++u) {
      if (!reach[k - 1][u]) continue;
      for (int v = 0; v < n; ++v) {
        if (model.Transition(u, v) > 0.0) reach[k][v] = 1;
      }
    }
  }
  return reach;
}

// State before step `step`: everything needed to extend the release prefix.
struct Node {
  int step = 0;
  std::vector<int> released;
  std::vector<double> joint;  // Pr(x_step, y_1..y_(step-1))
  // Extreme log Pr(y_1..y_(step-1) | x_1..x_(step-1)) over allowed input
  // paths ending one step before x_step, carried forward to x_step.
  std::vector<double> hi;
  std::vector<double> lo;
  double ldp = 0.0;
  std::vector<std::shared_ptr<const ReleasePolicy>> policies;
};

struct Accumulator {
  double sil = 0.0;
  std::vector<double> iil;
  double ldp = 0.0;
  double mi = 0.0;
  double exceed = 0.0;
  absl::Status status;
};

class Auditor {
 public:
  Auditor(const MarkovModel& model, const StreamMechanism& mech, int horizon,
          bool pairs, double threshold)
      : model_(model),
        mech_(mech),
        horizon_(horizon),
        n_(model.alphabet_size()),
        pairs_(pairs),
        threshold_(threshold),
        reach_(Reachability(model, horizon)) {}

  Node Root() const {
    Node root;
    root.joint = model_.prior().weights();
    root.hi.assign(n_, 0.0);
    root.lo.assign(n_, 0.0);
    return root;
  }

  // Depth-first audit below `node`. When `frontier` is set, nodes at
  // `split` are collected there instead of being explored.
  void Explore(const Node& node, Accumulator& acc, int split,
               std::vector<Node>* frontier) const {
    if (!acc.status.ok()) return;
    if (frontier != nullptr && node.step == split) {
      frontier->push_back(node);
      return;
    }
    absl::StatusOr<ProbVec> belief = ProbVec::Normalize(node.joint);
    if (!belief.ok()) {
      acc.status = belief.status();
      return;
    }
    absl::StatusOr<ReleasePolicy> policy = mech_.PolicyAt(node.step, *belief);
    if (!policy.ok()) {
      acc.status = policy.status();
      return;
    }
    if (policy->size() != n_) {
      acc.status = absl::InvalidArgumentError(absl::StrFormat(
          "policy over %d symbols for a model over %d", policy->size(), n_));
      return;
    }
    auto shared = std::make_shared<const ReleasePolicy>(*std::move(policy));
    const Matrix& a = shared->kernel();
    acc.iil[node.step] = std::max(acc.iil[node.step], IilExact(*belief, a));
    const std::vector<char>& reach = reach_[node.step];
    const bool leaf = node.step + 1 == horizon_;

    for (int y = 0; y < n_; ++y) {
      double py = 0.0;
      for (int u = 0; u < n_; ++u) py += node.joint[u] * a(u, y);
      if (!(py > 0.0)) continue;
      const double ldp = node.ldp + ColumnLogSpread(a, y);
      if (leaf) {
        double best_hi = -kInf;
        double best_lo = kInf;
        for (int u = 0; u < n_; ++u) {
          if (!reach[u]) continue;
          const double la = SafeLog(a(u, y));
          best_hi = std::max(best_hi, node.hi[u] + la);
          best_lo = std::min(best_lo, node.lo[u] + la);
        }
        const double log_py = std::log(py);
        acc.sil = std::max({acc.sil, best_hi - log_py, log_py - best_lo});
        acc.ldp = std::max(acc.ldp, ldp);
        if (pairs_) {
          std::vector<int> released = node.released;
          released.push_back(y);
          std::vector<std::shared_ptr<const ReleasePolicy>> policies =
              node.policies;
          policies.push_back(shared);
          EnumeratePairs(released, policies, log_py, acc);
        }
        continue;
      }
      Node child;
      child.step = node.step + 1;
      child.released = node.released;
      child.released.push_back(y);
      child.joint.assign(n_, 0.0);
      child.hi.assign(n_, -kInf);
      child.lo.assign(n_, kInf);
      for (int u = 0; u < n_; ++u) {
        const double w = node.joint[u] * a(u, y);
        const double la = SafeLog(a(u, y));
        for (int v = 0; v < n_; ++v) {
          const double t = model_.Transition(u, v);
          child.joint[v] += w * t;
          if (reach[u] && t > 0.0) {
            child.hi[v] = std::max(child.hi[v], node.hi[u] + la);
            child.lo[v] = std::min(child.lo[v], node.lo[u] + la);
          }
        }
      }
      child.ldp = ldp;
      if (pairs_) {
        child.policies = node.policies;
        child.policies.push_back(shared);
      }
      Explore(child, acc, split, frontier);
      if (!acc.status.ok()) return;
    }
  }

 private:
  // Adds the contribution of every input sequence paired with the full
  // release `y` to the mutual information and the exceedance mass.
  void EnumeratePairs(
      const std::vector<int>& y,
      const std::vector<std::shared_ptr<const ReleasePolicy>>& policies,
      double log_py, Accumulator& acc) const {
    std::vector<int> x(horizon_, 0);
    while (true) {
      const double px = model_.SequenceProbability(x);
      if (px > 0.0) {
        double pyx = 1.0;
        for (int k = 0; k < horizon_ && pyx > 0.0; ++k) {
          pyx *= policies[k]->kernel()(x[k], y[k]);
        }
        if (pyx > 0.0) {
          const double leak = std::log(pyx) - log_py;
          acc.mi += px * pyx * leak;
          if (std::abs(leak) > threshold_ + kExceedSlack) acc.exceed += px * pyx;
        }
      }
      int k = horizon_ - 1;
      while (k >= 0 && ++x[k] == n_) x[k--] = 0;
      if (k < 0) break;
    }
  }

  const MarkovModel& model_;
  const StreamMechanism& mech_;
  int horizon_;
  int n_;
  bool pairs_;
  double threshold_;
  std::vector<std::vector<char>> reach_;
};

absl::Status CheckAuditInputs(const MarkovModel& model,
                              const StreamMechanism& mech, int horizon) {
  if (horizon < 1) return absl::InvalidArgumentError("horizon must be >= 1");
  if (horizon > mech.num_steps()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "horizon %d exceeds the mechanism's %d steps", horizon,
        mech.num_steps()));
  }
  if (mech.alphabet_size() != model.alphabet_size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "mechanism alphabet %d differs from model alphabet %d",
        mech.alphabet_size(), model.alphabet_size()));
  }
  return absl::OkStatus();
}

std::vector<double> Schedule(const StreamMechanism& mech, int horizon) {
  std::vector<double> eps(horizon);
  for (int k = 0; k < horizon; ++k) eps[k] = mech.EpsilonAt(k);
  return eps;
}

}  // namespace

double LeakageReport::IilSum() const {
  return std::accumulate(iil_per_step.begin(), iil_per_step.end(), 0.0);
}

double LeakageReport::EpsilonTotal() const {
  return std::accumulate(epsilon_per_step.begin(), epsilon_per_step.end(),
                         0.0);
}

double IilExact(const ProbVec& belief, const Matrix& kernel) {
  const int n = belief.size();
  double worst = 0.0;
  for (int y = 0; y < kernel.cols(); ++y) {
    double m = 0.0;
    for (int x = 0; x < n; ++x) m += belief[x] * kernel(x, y);
    if (!(m > 0.0)) continue;
    for (int x = 0; x < n; ++x) {
      if (belief[x] == 0.0) continue;
      if (kernel(x, y) == 0.0) return kInf;
      worst = std::max(worst, std::abs(std::log(kernel(x, y) / m)));
    }
  }
  return worst;
}

double BilExact(const ProbVec& batch_belief, const Matrix& kernel) {
  return IilExact(batch_belief, kernel);
}

absl::StatusOr<LeakageReport> AuditExact(const MarkovModel& model,
                                         const StreamMechanism& mech,
                                         int horizon,
                                         const AuditOptions& options) {
  if (absl::Status s = CheckAuditInputs(model, mech, horizon); !s.ok()) {
    return s;
  }
  const double n = model.alphabet_size();
  if (std::pow(n, horizon) > kEnumerationBudget) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "%d^%d release sequences exceed the enumeration budget of %g",
        model.alphabet_size(), horizon, kEnumerationBudget));
  }
  LeakageReport report;
  report.horizon = horizon;
  report.epsilon_per_step = Schedule(mech, horizon);
  report.threshold = options.threshold.value_or(report.EpsilonTotal());
  const bool pairs = options.pairs && std::pow(n, 2 * horizon) <= kPairBudget;

  Auditor auditor(model, mech, horizon, pairs, report.threshold);
  const int threads = ResolveThreads(options.threads);
  // Split the tree where it has enough branches to keep every worker busy.
  int split = 0;
  while (split < horizon - 1 && std::pow(n, split) < 4.0 * threads) ++split;
  if (threads == 1) split = -1;

  std::vector<Node> frontier;
  Accumulator top;
  top.iil.assign(horizon, 0.0);
  auditor.Explore(auditor.Root(), top, split,
                  threads == 1 ? nullptr : &frontier);
  std::vector<Accumulator> parts(frontier.size(), top);
  for (Accumulator& part : parts) {
    part.sil = part.ldp = part.mi = part.exceed = 0.0;
  }
  ParallelFor(static_cast<int>(frontier.size()), threads, [&](int i) {
    auditor.Explore(frontier[i], parts[i], -1, nullptr);
  });
  parts.insert(parts.begin(), top);
  double mi = 0.0;
  double exceed = 0.0;
  report.iil_per_step.assign(horizon, 0.0);
  for (const Accumulator& part : parts) {
    if (!part.status.ok()) return part.status;
    report.sil = std::max(report.sil, part.sil);
    report.ldp_log_ratio = std::max(report.ldp_log_ratio, part.ldp);
    for (int k = 0; k < horizon; ++k) {
      report.iil_per_step[k] = std::max(report.iil_per_step[k], part.iil[k]);
    }
    mi += part.mi;
    exceed += part.exceed;
  }
  if (pairs) {
    report.mutual_information = std::max(0.0, mi);
    report.exceed_mass = exceed;
  }
  return report;
}

absl::StatusOr<double> SilExact(const MarkovModel& model,
                                const StreamMechanism& mech, int horizon) {
  AuditOptions options;
  options.pairs = false;
  absl::StatusOr<LeakageReport> report =
      AuditExact(model, mech, horizon, options);
  if (!report.ok()) return report.status();
  return report->sil;
}

absl::StatusOr<double> LdpLogRatio(const MarkovModel& model,
                                   const StreamMechanism& mech, int horizon) {
  AuditOptions options;
  options.pairs = false;
  absl::StatusOr<LeakageReport> report =
      AuditExact(model, mech, horizon, options);
  if (!report.ok()) return report.status();
  return report->ldp_log_ratio;
}

absl::StatusOr<LeakageReport> AuditMonteCarlo(const MarkovModel& model,
                                              const StreamMechanism& mech,
                                              int horizon, int samples,
                                              uint64_t seed,
                                              const AuditOptions& options) {
  if (absl::Status s = CheckAuditInputs(model, mech, horizon); !s.ok()) {
    return s;
  }
  if (samples < 1) return absl::InvalidArgumentError("samples must be >= 1");
  LeakageReport report;
  report.exact = false;
  report.samples = samples;
  report.horizon = horizon;
  report.epsilon_per_step = Schedule(mech, horizon);
  report.threshold = options.threshold.value_or(report.EpsilonTotal());

  // Fixed chunking keeps sums independent of the thread count.
  const int chunks = std::min(samples, 64);
  std::vector<Accumulator> parts(chunks);
  ParallelFor(chunks, options.threads, [&](int c) {
    Accumulator& acc = parts[c];
    acc.iil.assign(horizon, 0.0);
    const int begin = static_cast<int>(static_cast<int64_t>(samples) * c / chunks);
    const int end =
        static_cast<int>(static_cast<int64_t>(samples) * (c + 1) / chunks);
    for (int i = begin; i < end && acc.status.ok(); ++i) {
      StreamRng rng(seed, static_cast<uint64_t>(i));
      std::vector<int> x = SampleSequence(model, horizon, rng);
      BeliefState belief = InitBelief(model);
      double log_pyx = 0.0;
      double log_py = 0.0;
      double ldp = 0.0;
      for (int k = 0; k < horizon; ++k) {
        absl::StatusOr<ReleasePolicy> policy = mech.PolicyAt(k, belief.dist);
        if (!policy.ok()) {
          acc.status = policy.status();
          break;
        }
        const Matrix& a = policy->kernel();
        acc.iil[k] = std::max(acc.iil[k], IilExact(belief.dist, a));
        absl::StatusOr<int> y = PrivatizeStep(*policy, x[k], rng);
        if (!y.ok()) {
          acc.status = y.status();
          break;
        }
        double m = 0.0;
        for (int u = 0; u < a.rows(); ++u) m += belief.dist[u] * a(u, *y);
        log_pyx += std::log(a(x[k], *y));
        log_py += std::log(m);
        ldp += ColumnLogSpread(a, *y);
        if (k + 1 < horizon) {
          absl::StatusOr<BeliefState> next = UpdateInst(belief, a, *y, model);
          if (!next.ok()) {
            acc.status = next.status();
            break;
          }
          belief = *std::move(next);
        }
      }
      const double leak = log_pyx - log_py;
      acc.sil = std::max(acc.sil, std::abs(leak));
      acc.ldp = std::max(acc.ldp, ldp);
      acc.mi += leak;
      if (std::abs(leak) > report.threshold + kExceedSlack) acc.exceed += 1.0;
    }
  });
  double mi = 0.0;
  double exceed = 0.0;
  report.iil_per_step.assign(horizon, 0.0);
  for (const Accumulator& part : parts) {
    if (!part.status.ok()) return part.status;
    report.sil = std::max(report.sil, part.sil);
    report.ldp_log_ratio = std::max(report.ldp_log_ratio, part.ldp);
    for (int k = 0; k < horizon; ++k) {
      report.iil_per_step[k] = std::max(report.iil_per_step[k], part.iil[k]);
    }
    mi += part.mi;
    exceed += part.exceed;
  }
  report.mutual_information = mi / samples;
  report.exceed_mass = exceed / samples;
  return report;
}

absl::Status VisitHistories(
    const MarkovModel& model, const StreamMechanism& mech, int horizon,
    const std::function<absl::Status(const HistoryView&)>& visit) {
  if (absl::Status s = CheckAuditInputs(model, mech, horizon); !s.ok()) {
    return s;
  }
  if (std::pow(static_cast<double>(model.alphabet_size()), horizon - 1) >
      kEnumerationBudget) {
    return absl::ResourceExhaustedError(
        "release prefixes exceed the enumeration budget");
  }
  const int n = model.alphabet_size();
  std::vector<int> released;
  std::function<absl::Status(const std::vector<double>&, double)> recurse =
      [&](const std::vector<double>& joint, double prob) -> absl::Status {
    const int step = static_cast<int>(released.size());
    absl::StatusOr<ProbVec> belief = ProbVec::Normalize(joint);
    if (!belief.ok()) return belief.status();
    absl::StatusOr<ReleasePolicy> policy = mech.PolicyAt(step, *belief);
    if (!policy.ok()) return policy.status();
    HistoryView view{step, released, joint, prob, &*belief, &*policy};
    if (absl::Status s = visit(view); !s.ok()) return s;
    if (step + 1 == horizon) return absl::OkStatus();
    const Matrix& a = policy->kernel();
    for (int y = 0; y < n; ++y) {
      std::vector<double> next(n, 0.0);
      double py = 0.0;
      for (int u = 0; u < n; ++u) {
        const double w = joint[u] * a(u, y);
        py += w;
        for (int v = 0; v < n; ++v) next[v] += w * model.Transition(u, v);
      }
      if (!(py > 0.0)) continue;
      released.push_back(y);
      absl::Status s = recurse(next, py);
      released.pop_back();
      if (!s.ok()) return s;
    }
    return absl::OkStatus();
  };
  return recurse(model.prior().weights(), 1.0);
}

namespace {

nlohmann::json Number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

}  // namespace

std::string ReportToJson(const LeakageReport& report) {
  nlohmann::json doc;
  doc["method"] = report.exact ? "exact" : "monte_carlo";
  doc["samples"] = report.samples;
  doc["horizon"] = report.horizon;
  doc["sil"] = Number(report.sil);
  nlohmann::json iil = nlohmann::json::array();
  for (double v : report.iil_per_step) iil.push_back(Number(v));
  doc["iil_per_step"] = iil;
  doc["iil_sum"] = Number(report.IilSum());
  doc["ldp_log_ratio"] = Number(report.ldp_log_ratio);
  doc["mutual_information"] = report.mutual_information
                                  ? Number(*report.mutual_information)
                                  : nlohmann::json(nullptr);
  doc["exceed_mass"] = report.exceed_mass ? Number(*report.exceed_mass)
                                          : nlohmann::json(nullptr);
  doc["threshold"] = report.threshold;
  doc["epsilon_per_step"] = report.epsilon_per_step;
  doc["epsilon_total"] = report.EpsilonTotal();
  return doc.dump(2) + "\n";
}

std::string ReportToCsv(const LeakageReport& report) {
  std::string out = "step,epsilon,iil\n";
  for (int k = 0; k < static_cast<int>(report.iil_per_step.size()); ++k) {
    const double eps = k < static_cast<int>(report.epsilon_per_step.size())
                           ? report.epsilon_per_step[k]
                           : 0.0;
    absl::StrAppendFormat(&out, "%d,%.17g,%.17g\n", k + 1, eps,
                          report.iil_per_step[k]);
  }
  return out;
}

}  // namespace sip
