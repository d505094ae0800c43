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

#ifndef SIP_MECH_STREAM_H_
#define SIP_MECH_STREAM_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "sip/mech/policy.h"
#include "sip/model/markov.h"
#include "sip/model/rng.h"

namespace sip {

// A release mechanism over a finite horizon. The policy for each step may
// depend on the released prefix only through the adversary's belief over
// the current symbol, which callers compute and pass in. Implementations
// are immutable and safe to share across threads.
class StreamMechanism {
 public:
  virtual ~StreamMechanism() = default;

  virtual std::string name() const = 0;
  virtual int alphabet_size() const = 0;
  virtual int num_steps() const = 0;
  // Budget spent at 0-based `step`.
  virtual double EpsilonAt(int step) const = 0;
  virtual absl::StatusOr<ReleasePolicy> PolicyAt(
      int step, const ProbVec& belief) const = 0;
};

// Conditional randomized response at each step's budget.
class CrrMechanism final : public StreamMechanism {
 public:
  enum class Variant {
    kAdaptive,    // CrrPolicy
    kClosedForm,  // CrrClosedFormPolicy
  };

  static absl::StatusOr<CrrMechanism> Create(int alphabet_size,
                                             std::vector<double> schedule,
                                             Variant variant = Variant::kAdaptive);

  std::string name() const override;
  int alphabet_size() const override { return alphabet_size_; }
  int num_steps() const override { return static_cast<int>(schedule_.size()); }
  double EpsilonAt(int step) const override { return schedule_[step]; }
  absl::StatusOr<ReleasePolicy> PolicyAt(int step,
                                         const ProbVec& belief) const override;

 private:
  CrrMechanism(int alphabet_size, std::vector<double> schedule, Variant variant)
      : alphabet_size_(alphabet_size),
        schedule_(std::move(schedule)),
        variant_(variant) {}

  int alphabet_size_;
  std::vector<double> schedule_;
  Variant variant_;
};

// k-ary randomized response at each step's budget; ignores the belief.
class RrLdpMechanism final : public StreamMechanism {
 public:
  static absl::StatusOr<RrLdpMechanism> Create(int alphabet_size,
                                               std::vector<double> schedule);

  std::string name() const override { return "rr-ldp"; }
  int alphabet_size() const override { return alphabet_size_; }
  int num_steps() const override { return static_cast<int>(schedule_.size()); }
  double EpsilonAt(int step) const override { return schedule_[step]; }
  absl::StatusOr<ReleasePolicy> PolicyAt(int step,
                                         const ProbVec& belief) const override;

 private:
  RrLdpMechanism(int alphabet_size, std::vector<double> schedule)
      : alphabet_size_(alphabet_size), schedule_(std::move(schedule)) {}

  int alphabet_size_;
  std::vector<double> schedule_;
};

// The same kernel at every step; its budget is the policy's stated epsilon.
class FixedPolicyMechanism final : public StreamMechanism {
 public:
  FixedPolicyMechanism(ReleasePolicy policy, int steps)
      : policy_(std::move(policy)), steps_(steps) {}

  std::string name() const override { return "fixed"; }
  int alphabet_size() const override { return policy_.size(); }
  int num_steps() const override { return steps_; }
  double EpsilonAt(int) const override { return policy_.epsilon(); }
  absl::StatusOr<ReleasePolicy> PolicyAt(int step,
                                         const ProbVec& belief) const override;

 private:
  ReleasePolicy policy_;
  int steps_;
};

// Runs the release loop for one stream: policy from the current belief,
// sample, Bayes update. Fails if `input` is longer than the mechanism's
// horizon or contains out-of-range symbols.
absl::StatusOr<std::vector<int>> PrivatizeStream(const MarkovModel& model,
                                                 const StreamMechanism& mech,
                                                 std::span<const int> input,
                                                 StreamRng& rng);

}  // namespace sip

#endif  // SIP_MECH_STREAM_H_
