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

#include "sip/mech/budget.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_format.h"

namespace sip {
namespace {

absl::Status CheckBudgets(std::span<const double> budgets) {
  for (size_t k = 0; k < budgets.size(); ++k) {
    if (!(budgets[k] >= 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("budget %d is %g; must be >= 0", k, budgets[k]));
    }
  }
  return absl::OkStatus();
}

absl::Status CheckAdvancedArgs(double epsilon, int steps, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in (0, 1), got %g", delta));
  }
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError("epsilon must be finite and >= 0");
  }
  if (steps < 1) return absl::InvalidArgumentError("steps must be >= 1");
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<PrivacyBudget> PrivacyBudget::Uniform(double total, int steps,
                                                     double delta) {
  if (steps < 1) return absl::InvalidArgumentError("steps must be >= 1");
  if (!(total >= 0.0)) {
    return absl::InvalidArgumentError("total budget must be >= 0");
  }
  return FromSchedule(std::vector<double>(steps, total / steps), delta);
}

absl::StatusOr<PrivacyBudget> PrivacyBudget::FromSchedule(
    std::vector<double> schedule, double delta) {
  if (absl::Status s = CheckBudgets(schedule); !s.ok()) return s;
  if (!(delta >= 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in [0, 1), got %g", delta));
  }
  return PrivacyBudget(std::move(schedule), delta);
}

double PrivacyBudget::LinearTotal(int steps) const {
  double total = 0.0;
  for (int k = 0; k < steps && k < this->steps(); ++k) total += schedule_[k];
  return total;
}

std::vector<double> PrivacyBudget::GroupTotals(int width) const {
  std::vector<double> out;
  for (int start = 0; start < steps(); start += width) {
    double total = 0.0;
    for (int k = start; k < std::min(start + width, steps()); ++k) {
      total += schedule_[k];
    }
    out.push_back(total);
  }
  return out;
}

absl::StatusOr<double> ComposeLinear(std::span<const double> budgets) {
  if (absl::Status s = CheckBudgets(budgets); !s.ok()) return s;
  double total = 0.0;
  for (double e : budgets) total += e;
  return total;
}

absl::StatusOr<double> ComposeAdvanced(double epsilon, int steps,
                                       double delta) {
  if (absl::Status s = CheckAdvancedArgs(epsilon, steps, delta); !s.ok()) {
    return s;
  }
  const double t = steps;
  return t * epsilon * std::expm1(epsilon) +
         std::sqrt(t) * epsilon * std::sqrt(2.0 * std::log(1.0 / delta));
}

absl::StatusOr<double> ComposeAdvancedLinear(double epsilon, int steps,
                                             double delta) {
  if (absl::Status s = CheckAdvancedArgs(epsilon, steps, delta); !s.ok()) {
    return s;
  }
  const double t = steps;
  return t * epsilon * std::expm1(epsilon) +
         t * epsilon * std::sqrt(2.0 * std::log(1.0 / delta));
}

absl::StatusOr<double> ComposeAdvanced(std::span<const double> budgets,
                                       double delta) {
  if (absl::Status s = CheckBudgets(budgets); !s.ok()) return s;
  if (budgets.empty()) return 0.0;
  return ComposeAdvanced(*std::max_element(budgets.begin(), budgets.end()),
                         static_cast<int>(budgets.size()), delta);
}

}  // namespace sip
