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

#include "sip/mech/stream.h"

#include "absl/strings/str_format.h"
#include "sip/belief/belief.h"

namespace sip {
namespace {

absl::Status CheckSchedule(int alphabet_size,
                           const std::vector<double>& schedule) {
  if (alphabet_size < 2) {
    return absl::InvalidArgumentError(
        "release mechanisms need an alphabet of at least 2 symbols");
  }
  for (size_t k = 0; k < schedule.size(); ++k) {
    if (!(schedule[k] >= 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("step %d budget %g must be >= 0", k, schedule[k]));
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<CrrMechanism> CrrMechanism::Create(int alphabet_size,
                                                  std::vector<double> schedule,
                                                  Variant variant) {
  if (absl::Status s = CheckSchedule(alphabet_size, schedule); !s.ok()) {
    return s;
  }
  return CrrMechanism(alphabet_size, std::move(schedule), variant);
}

std::string CrrMechanism::name() const {
  return variant_ == Variant::kAdaptive ? "sip-inst" : "sip-inst-closed-form";
}

absl::StatusOr<ReleasePolicy> CrrMechanism::PolicyAt(
    int step, const ProbVec& belief) const {
  if (step < 0 || step >= num_steps()) {
    return absl::OutOfRangeError(absl::StrFormat(
        "step %d outside the budget schedule of length %d", step, num_steps()));
  }
  return variant_ == Variant::kAdaptive
             ? CrrPolicy(belief, schedule_[step])
             : CrrClosedFormPolicy(belief, schedule_[step]);
}

absl::StatusOr<RrLdpMechanism> RrLdpMechanism::Create(
    int alphabet_size, std::vector<double> schedule) {
  if (absl::Status s = CheckSchedule(alphabet_size, schedule); !s.ok()) {
    return s;
  }
  return RrLdpMechanism(alphabet_size, std::move(schedule));
}

absl::StatusOr<ReleasePolicy> RrLdpMechanism::PolicyAt(int step,
                                                       const ProbVec&) const {
  if (step < 0 || step >= num_steps()) {
    return absl::OutOfRangeError(absl::StrFormat(
        "step %d outside the budget schedule of length %d", step, num_steps()));
  }
  return RrLdpPolicy(alphabet_size_, schedule_[step]);
}

absl::StatusOr<ReleasePolicy> FixedPolicyMechanism::PolicyAt(
    int step, const ProbVec&) const {
  if (step < 0 || step >= steps_) {
    return absl::OutOfRangeError(
        absl::StrFormat("step %d outside horizon %d", step, steps_));
  }
  return policy_;
}

absl::StatusOr<std::vector<int>> PrivatizeStream(const MarkovModel& model,
                                                 const StreamMechanism& mech,
                                                 std::span<const int> input,
                                                 StreamRng& rng) {
  if (mech.alphabet_size() != model.alphabet_size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "mechanism alphabet %d differs from model alphabet %d",
        mech.alphabet_size(), model.alphabet_size()));
  }
  if (static_cast<int>(input.size()) > mech.num_steps()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sequence of length %d is longer than the budget schedule (%d)",
        input.size(), mech.num_steps()));
  }
  std::vector<int> output;
  output.reserve(input.size());
  BeliefState belief = InitBelief(model);
  for (size_t k = 0; k < input.size(); ++k) {
    absl::StatusOr<ReleasePolicy> policy =
        mech.PolicyAt(static_cast<int>(k), belief.dist);
    if (!policy.ok()) return policy.status();
    absl::StatusOr<int> y = PrivatizeStep(*policy, input[k], rng);
    if (!y.ok()) return y.status();
    output.push_back(*y);
    if (k + 1 == input.size()) break;
    absl::StatusOr<BeliefState> next =
        UpdateInst(belief, policy->kernel(), *y, model);
    if (!next.ok()) return next.status();
    belief = *std::move(next);
  }
  return output;
}

}  // namespace sip
