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

#ifndef SIP_EXAMPLE2_TWO_STEP_H_
#define SIP_EXAMPLE2_TWO_STEP_H_

#include <array>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "sip/model/markov.h"

namespace sip {

// Two binary symbols: Pr(X_1 = 1) = p1 and X_2 flips X_1 with probability
// phi. Step k releases under budget eps_k.
struct TwoStepConfig {
  double p1 = 0.5;
  double phi = 0.25;
  double eps1 = 1.0;
  double eps2 = 1.0;
};

absl::Status ValidateTwoStepConfig(const TwoStepConfig& config);

// The chain (X_1, X_2) as a Markov model.
absl::StatusOr<MarkovModel> TwoStepModel(const TwoStepConfig& config);

// Correlation coefficient of X_1 and X_2.
double RhoX(const TwoStepConfig& config);

// Flip probabilities of a two-step binary mechanism whose second step
// depends on the first release only.
struct TwoStepParams {
  // Step 1: Pr(Y_1 = 1 | X_1 = 0) and Pr(Y_1 = 0 | X_1 = 1).
  double flip1_from0 = 0.0;
  double flip1_from1 = 0.0;
  // Step 2, indexed by y_1: Pr(Y_2 = 1 | X_2 = 0, y_1) and
  // Pr(Y_2 = 0 | X_2 = 1, y_1), the same for either value of X_1.
  std::array<double, 2> flip2_from0 = {0.0, 0.0};
  std::array<double, 2> flip2_from1 = {0.0, 0.0};
};

// Closed-form boundary parameters: at each step, move to symbol y with
// probability belief(y) e^-eps, where the step-2 belief is Pr(X_2 | y_1).
// Off-diagonal ratios sit on the lower band edge e^-eps; the stay ratio
// stays within e^eps only while every belief entry is at least
// 1 / (1 + e^eps).
absl::StatusOr<TwoStepParams> OptimalTwoStepParams(const TwoStepConfig& config);

// Pr(X_2 = 1 | Y_1 = y1) under the step-1 parameters of `params`.
double StepTwoBelief(const TwoStepConfig& config, const TwoStepParams& params,
                     int y1);

// Noise N_k = 1 when Y_k != X_k.
struct NoiseQuantities {
  double pr_n1 = 0.0;
  double pr_n2 = 0.0;
  double pr_n2_given_n1 = 0.0;
  // Pearson correlation of N_1 and N_2; 0 when either is constant.
  double rho_n = 0.0;
  // I(N_1; N_2) in nats.
  double mi_noise = 0.0;
};
absl::StatusOr<NoiseQuantities> ComputeNoiseQuantities(
    const TwoStepConfig& config, const TwoStepParams& params);
absl::StatusOr<NoiseQuantities> ComputeNoiseQuantities(
    const TwoStepConfig& config);

// Exact leakage max |log Pr(x_1, x_2 | y_1, y_2) / Pr(x_1, x_2)| over all
// supported pairs; +inf when a supported input is ruled out.
double TwoStepLeakage(const TwoStepConfig& config, const TwoStepParams& params);

struct MinLeakageResult {
  // History-dependent step 2 (separate flips for each y_1).
  double correlated = 0.0;
  TwoStepParams correlated_params;
  // One pair of step-2 flips for both values of y_1.
  double independent = 0.0;
  TwoStepParams independent_params;
};

// Keeps step 1 at its closed form and grid-searches the step-2 flip
// probabilities over {0, 1/(r-1), ..., 1}^2 (r = resolution) to minimize
// TwoStepLeakage subject to Pr(N_2 = 1) <= cap. The correlated search
// ranges over every independent choice, so correlated <= independent.
absl::StatusOr<MinLeakageResult> MinLeakageUnderNoiseCap(
    const TwoStepConfig& config, double cap, int resolution);

struct CurveSpec {
  double p1 = 0.5;
  double eps1 = 1.0;
  double eps2 = 1.0;
  double cap = 0.2;
  int resolution = 1001;
  std::vector<double> phis;
  int threads = 1;
};

struct CurveRow {
  double phi = 0.0;
  double rho_x = 0.0;
  double rho_n = 0.0;
  double mi_noise = 0.0;
  double pr_n2 = 0.0;
  double leak_corr = 0.0;
  double leak_indep = 0.0;
};

// `points` evenly spaced values from 0 to 1 ({0} for a single point).
std::vector<double> PhiGrid(int points);

absl::StatusOr<std::vector<CurveRow>> ComputeCurves(const CurveSpec& spec);
// Metadata comment line, header, one row per phi.
std::string CurvesToCsv(const CurveSpec& spec,
                        const std::vector<CurveRow>& rows);
absl::Status EmitCurves(const CurveSpec& spec, const std::string& path);

}  // namespace sip

#endif  // SIP_EXAMPLE2_TWO_STEP_H_
