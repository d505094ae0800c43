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

#include "sip/example2/two_step.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "absl/strings/str_format.h"
#include "json.hpp"
#include "sip/audit/information.h"
#include "sip/audit/parallel.h"
#include "sip/mech/policy.h"
#include "sip/model/io.h"

namespace sip {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// e^-eps, exactly 0 for budgets treated as unbounded.
double DecayOf(double eps) {
  return eps >= kEpsilonInfinity ? 0.0 : std::exp(-eps);
}

double SafeLog(double x) { return x > 0.0 ? std::log(x) : -kInf; }

// Joint law of (X_1, X_2).
struct Joint {
  double px[2];
  double trans[2][2];
};

Joint JointOf(const TwoStepConfig& c) {
  return Joint{{1.0 - c.p1, c.p1},
               {{1.0 - c.phi, c.phi}, {c.phi, 1.0 - c.phi}}};
}

double StepOneKernel(const TwoStepParams& p, int x1, int y1) {
  const double flip = x1 == 0 ? p.flip1_from0 : p.flip1_from1;
  return y1 == x1 ? 1.0 - flip : flip;
}

double StepTwoKernel(double flip_from0, double flip_from1, int x2, int y2) {
  const double flip = x2 == 0 ? flip_from0 : flip_from1;
  return y2 == x2 ? 1.0 - flip : flip;
}

// Leakage and noise of the step-2 flips that follow one value of y_1,
// with step 1 fixed. SIL is the max of this over y_1 because the
// log-ratio splits into a step-1 term and a step-2 term given y_1.
class BranchEvaluator {
 public:
  BranchEvaluator(const TwoStepConfig& config, const TwoStepParams& step1,
                  int y1) {
    const Joint j = JointOf(config);
    double py1 = 0.0;
    for (int x1 = 0; x1 < 2; ++x1) py1 += j.px[x1] * StepOneKernel(step1, x1, y1);
    active_ = py1 > 0.0;
    for (int x2 = 0; x2 < 2; ++x2) {
      max_a_[x2] = -kInf;
      min_a_[x2] = kInf;
      supported_[x2] = false;
      weight_[x2] = 0.0;
      for (int x1 = 0; x1 < 2; ++x1) {
        const double prior = j.px[x1] * j.trans[x1][x2];
        if (!(prior > 0.0)) continue;
        const double q = StepOneKernel(step1, x1, y1);
        weight_[x2] += prior * q;
        if (!active_) continue;
        const double a = SafeLog(q / py1);
        supported_[x2] = true;
        max_a_[x2] = std::max(max_a_[x2], a);
        min_a_[x2] = std::min(min_a_[x2], a);
      }
      belief_[x2] = active_ ? weight_[x2] / py1 : 0.0;
    }
  }

  // Pr(y_1, N_2 = 1).
  double Noise(double f0, double f1) const {
    return weight_[0] * f0 + weight_[1] * f1;
  }

  double Leakage(double f0, double f1) const {
    if (!active_) return 0.0;
    double worst = 0.0;
    for (int y2 = 0; y2 < 2; ++y2) {
      double m = 0.0;
      for (int x2 = 0; x2 < 2; ++x2) {
        m += belief_[x2] * StepTwoKernel(f0, f1, x2, y2);
      }
      if (!(m > 0.0)) continue;
      for (int x2 = 0; x2 < 2; ++x2) {
        if (!supported_[x2]) continue;
        const double k = StepTwoKernel(f0, f1, x2, y2);
        if (k == 0.0) return kInf;
        const double b = std::log(k / m);
        worst = std::max({worst, max_a_[x2] + b, -(min_a_[x2] + b)});
      }
    }
    return worst;
  }

  double belief(int x2) const { return belief_[x2]; }

 private:
  bool active_ = false;
  double weight_[2];
  double belief_[2];
  double max_a_[2];
  double min_a_[2];
  bool supported_[2];
};

struct GridPoint {
  double noise;
  double leakage;
  int index;
};

}  // namespace

absl::Status ValidateTwoStepConfig(const TwoStepConfig& c) {
  if (!(c.p1 > 0.0 && c.p1 < 1.0)) {
    return absl::InvalidArgumentError("p1 must lie in (0, 1)");
  }
  if (!(c.phi >= 0.0 && c.phi <= 1.0)) {
    return absl::InvalidArgumentError("phi must lie in [0, 1]");
  }
  if (!(c.eps1 >= 0.0) || !(c.eps2 >= 0.0)) {
    return absl::InvalidArgumentError("eps1 and eps2 must be >= 0");
  }
  return absl::OkStatus();
}

absl::StatusOr<MarkovModel> TwoStepModel(const TwoStepConfig& config) {
  if (absl::Status s = ValidateTwoStepConfig(config); !s.ok()) return s;
  const Joint j = JointOf(config);
  return MarkovModel::Create({j.px[0], j.px[1]},
                             {{j.trans[0][0], j.trans[0][1]},
                              {j.trans[1][0], j.trans[1][1]}});
}

double RhoX(const TwoStepConfig& c) {
  const double p = c.p1;
  const double phi = c.phi;
  return (1.0 - 2.0 * phi) * std::sqrt(p * (1.0 - p)) /
         std::sqrt((p * phi + (1.0 - p) * (1.0 - phi)) *
                   ((1.0 - p) * phi + p * (1.0 - phi)));
}

double StepTwoBelief(const TwoStepConfig& config, const TwoStepParams& params,
                     int y1) {
  return BranchEvaluator(config, params, y1).belief(1);
}

absl::StatusOr<TwoStepParams> OptimalTwoStepParams(
    const TwoStepConfig& config) {
  if (absl::Status s = ValidateTwoStepConfig(config); !s.ok()) return s;
  const double d1 = DecayOf(config.eps1);
  const double d2 = DecayOf(config.eps2);
  TwoStepParams params;
  params.flip1_from0 = config.p1 * d1;
  params.flip1_from1 = (1.0 - config.p1) * d1;
  for (int y1 = 0; y1 < 2; ++y1) {
    const double b1 = StepTwoBelief(config, params, y1);
    params.flip2_from0[y1] = b1 * d2;
    params.flip2_from1[y1] = (1.0 - b1) * d2;
  }
  return params;
}

absl::StatusOr<NoiseQuantities> ComputeNoiseQuantities(
    const TwoStepConfig& config, const TwoStepParams& params) {
  if (absl::Status s = ValidateTwoStepConfig(config); !s.ok()) return s;
  const Joint j = JointOf(config);
  // joint[n1][n2] = Pr(N_1 = n1, N_2 = n2), summed over every path.
  Matrix joint(2, 2);
  for (int x1 = 0; x1 < 2; ++x1) {
    for (int y1 = 0; y1 < 2; ++y1) {
      for (int x2 = 0; x2 < 2; ++x2) {
        for (int y2 = 0; y2 < 2; ++y2) {
          const double p =
              j.px[x1] * StepOneKernel(params, x1, y1) * j.trans[x1][x2] *
              StepTwoKernel(params.flip2_from0[y1], params.flip2_from1[y1], x2,
                            y2);
          joint(y1 != x1, y2 != x2) += p;
        }
      }
    }
  }
  NoiseQuantities q;
  q.pr_n1 = joint(1, 0) + joint(1, 1);
  q.pr_n2 = joint(0, 1) + joint(1, 1);
  q.pr_n2_given_n1 = q.pr_n1 > 0.0 ? joint(1, 1) / q.pr_n1 : 0.0;
  const double var = q.pr_n1 * (1.0 - q.pr_n1) * q.pr_n2 * (1.0 - q.pr_n2);
  q.rho_n = var > 0.0 ? (joint(1, 1) - q.pr_n1 * q.pr_n2) / std::sqrt(var) : 0.0;
  q.rho_n = std::clamp(q.rho_n, -1.0, 1.0);
  // Rounding can leave the table a few ulps off 1.
  const double total = std::accumulate(joint.data().begin(),
                                       joint.data().end(), 0.0);
  for (double& v : joint.data()) v /= total;
  absl::StatusOr<double> mi = MutualInformation(joint);
  if (!mi.ok()) return mi.status();
  q.mi_noise = *mi;
  return q;
}

absl::StatusOr<NoiseQuantities> ComputeNoiseQuantities(
    const TwoStepConfig& config) {
  absl::StatusOr<TwoStepParams> params = OptimalTwoStepParams(config);
  if (!params.ok()) return params.status();
  return ComputeNoiseQuantities(config, *params);
}

double TwoStepLeakage(const TwoStepConfig& config,
                      const TwoStepParams& params) {
  double worst = 0.0;
  for (int y1 = 0; y1 < 2; ++y1) {
    worst = std::max(worst, BranchEvaluator(config, params, y1)
                                .Leakage(params.flip2_from0[y1],
                                         params.flip2_from1[y1]));
  }
  return worst;
}

absl::StatusOr<MinLeakageResult> MinLeakageUnderNoiseCap(
    const TwoStepConfig& config, double cap, int resolution) {
  if (!(cap >= 0.0 && cap <= 0.5)) {
    return absl::InvalidArgumentError("noise cap must lie in [0, 0.5]");
  }
  if (resolution < 100) {
    return absl::InvalidArgumentError("grid resolution must be >= 100");
  }
  absl::StatusOr<TwoStepParams> base = OptimalTwoStepParams(config);
  if (!base.ok()) return base.status();
  const int r = resolution;
  std::vector<double> grid(r);
  for (int i = 0; i < r; ++i) grid[i] = static_cast<double>(i) / (r - 1);

  // Leakage and noise of every (f0, f1) on the grid, for each y_1.
  const int cells = r * r;
  std::vector<GridPoint> branch[2];
  for (int y1 = 0; y1 < 2; ++y1) {
    BranchEvaluator eval(config, *base, y1);
    branch[y1].resize(cells);
    for (int i = 0; i < r; ++i) {
      for (int k = 0; k < r; ++k) {
        const int c = i * r + k;
        branch[y1][c] = {eval.Noise(grid[i], grid[k]),
                         eval.Leakage(grid[i], grid[k]), c};
      }
    }
  }
  auto params_for = [&](int c0, int c1) {
    TwoStepParams p = *base;
    p.flip2_from0 = {grid[c0 / r], grid[c1 / r]};
    p.flip2_from1 = {grid[c0 % r], grid[c1 % r]};
    return p;
  };

  MinLeakageResult result;
  // Same flips after either release.
  double best_indep = kInf;
  int indep_cell = -1;
  for (int c = 0; c < cells; ++c) {
    const GridPoint& a = branch[0][c];
    const GridPoint& b = branch[1][c];
    if (!(a.noise + b.noise <= cap)) continue;
    const double v = std::max(a.leakage, b.leakage);
    if (v < best_indep) {
      best_indep = v;
      indep_cell = c;
    }
  }
  if (indep_cell < 0) {
    return absl::FailedPreconditionError(
        "no step-2 flips on the grid meet the noise cap");
  }

  // Separate flips per release: pair each y_1 = 0 cell with the least
  // leaky y_1 = 1 cell that fits in the remaining noise.
  std::vector<GridPoint> sorted = branch[1];
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const GridPoint& a, const GridPoint& b) {
                     return a.noise < b.noise;
                   });
  std::vector<int> prefix_best(cells);
  for (int i = 0; i < cells; ++i) {
    prefix_best[i] =
        i > 0 && sorted[prefix_best[i - 1]].leakage <= sorted[i].leakage
            ? prefix_best[i - 1]
            : i;
  }
  double best_corr = kInf;
  int corr0 = -1;
  int corr1 = -1;
  for (const GridPoint& a : branch[0]) {
    // Largest i with a.noise + sorted[i].noise <= cap.
    int lo = 0;
    int hi = cells;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (a.noise + sorted[mid].noise <= cap) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    if (lo == 0) continue;
    const GridPoint& b = sorted[prefix_best[lo - 1]];
    const double v = std::max(a.leakage, b.leakage);
    if (v < best_corr) {
      best_corr = v;
      corr0 = a.index;
      corr1 = b.index;
    }
  }
  result.independent = best_indep;
  result.independent_params = params_for(indep_cell, indep_cell);
  result.correlated = best_corr;
  result.correlated_params = params_for(corr0, corr1);
  return result;
}

std::vector<double> PhiGrid(int points) {
  if (points <= 1) return {0.0};
  std::vector<double> phis(points);
  for (int i = 0; i < points; ++i) {
    phis[i] = static_cast<double>(i) / (points - 1);
  }
  return phis;
}

absl::StatusOr<std::vector<CurveRow>> ComputeCurves(const CurveSpec& spec) {
  if (spec.phis.empty()) return absl::InvalidArgumentError("empty phi grid");
  for (double phi : spec.phis) {
    TwoStepConfig config{spec.p1, phi, spec.eps1, spec.eps2};
    if (absl::Status s = ValidateTwoStepConfig(config); !s.ok()) return s;
  }
  const int n = static_cast<int>(spec.phis.size());
  std::vector<CurveRow> rows(n);
  std::vector<absl::Status> status(n);
  ParallelFor(n, spec.threads, [&](int i) {
    TwoStepConfig config{spec.p1, spec.phis[i], spec.eps1, spec.eps2};
    absl::StatusOr<NoiseQuantities> noise = ComputeNoiseQuantities(config);
    if (!noise.ok()) {
      status[i] = noise.status();
      return;
    }
    absl::StatusOr<MinLeakageResult> leak =
        MinLeakageUnderNoiseCap(config, spec.cap, spec.resolution);
    if (!leak.ok()) {
      status[i] = leak.status();
      return;
    }
    rows[i] = CurveRow{spec.phis[i],     RhoX(config),    noise->rho_n,
                       noise->mi_noise,  noise->pr_n2,    leak->correlated,
                       leak->independent};
  });
  for (const absl::Status& s : status) {
    if (!s.ok()) return s;
  }
  return rows;
}

std::string CurvesToCsv(const CurveSpec& spec,
                        const std::vector<CurveRow>& rows) {
  nlohmann::json meta = {{"p1", spec.p1},
                         {"eps1", spec.eps1},
                         {"eps2", spec.eps2},
                         {"cap", spec.cap},
                         {"resolution", spec.resolution},
                         {"points", spec.phis.size()}};
  std::string out = "# " + meta.dump() + "\n";
  out += "phi,rho_x,rho_n,mi_noise,pr_n2,leak_corr,leak_indep\n";
  for (const CurveRow& row : rows) {
    absl::StrAppendFormat(&out, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          row.phi, row.rho_x, row.rho_n, row.mi_noise,
                          row.pr_n2, row.leak_corr, row.leak_indep);
  }
  return out;
}

absl::Status EmitCurves(const CurveSpec& spec, const std::string& path) {
  absl::StatusOr<std::vector<CurveRow>> rows = ComputeCurves(spec);
  if (!rows.ok()) return rows.status();
  return WriteTextFile(path, CurvesToCsv(spec, *rows));
}

}  // namespace sip
