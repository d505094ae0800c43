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

#ifndef SIP_MECH_BUDGET_H_
#define SIP_MECH_BUDGET_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace sip {

// Per-step budgets plus the delta paired with advanced composition.
class PrivacyBudget {
 public:
  // Splits `total` evenly over `steps`.
  static absl::StatusOr<PrivacyBudget> Uniform(double total, int steps,
                                               double delta = 0.0);
  static absl::StatusOr<PrivacyBudget> FromSchedule(std::vector<double> schedule,
                                                    double delta = 0.0);

  const std::vector<double>& schedule() const { return schedule_; }
  double delta() const { return delta_; }
  int steps() const { return static_cast<int>(schedule_.size()); }

  // Sum of the first `steps` entries.
  double LinearTotal(int steps) const;
  double LinearTotal() const { return LinearTotal(this->steps()); }

  // Budget of each width-w group of consecutive steps (the sum of its
  // entries); the final group is shorter when w does not divide the length.
  std::vector<double> GroupTotals(int width) const;

 private:
  PrivacyBudget(std::vector<double> schedule, double delta)
      : schedule_(std::move(schedule)), delta_(delta) {}

  std::vector<double> schedule_;
  double delta_;
};

// Sequential composition: sum of the per-step budgets.
absl::StatusOr<double> ComposeLinear(std::span<const double> budgets);

// Advanced composition for T steps at eps each:
//   T eps (e^eps - 1) + sqrt(T) eps sqrt(2 ln(1/delta)).
absl::StatusOr<double> ComposeAdvanced(double epsilon, int steps, double delta);

// The same bound with the second term linear in T:
//   T eps (e^eps - 1) + T eps sqrt(2 ln(1/delta)).
absl::StatusOr<double> ComposeAdvancedLinear(double epsilon, int steps,
                                             double delta);

// Advanced composition of a nonuniform schedule, bounded by treating every
// step as spending the largest entry.
absl::StatusOr<double> ComposeAdvanced(std::span<const double> budgets,
                                       double delta);

}  // namespace sip

#endif  // SIP_MECH_BUDGET_H_
