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

#ifndef SIP_MECH_POLICY_H_
#define SIP_MECH_POLICY_H_

#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "sip/model/prob.h"
#include "sip/model/rng.h"

namespace sip {

// Budgets at or above this value are treated as unbounded.
inline constexpr double kEpsilonInfinity = 50.0;

enum class PolicyKind {
  kCrr,      // conditional randomized response for one symbol
  kRrLdp,    // k-ary randomized response
  kBatched,  // optimized kernel over batches
  kCustom,   // any other validated kernel (user supplied, identity, ...)
};

std::string_view PolicyKindName(PolicyKind kind);
absl::StatusOr<PolicyKind> ParsePolicyKind(std::string_view name);

// A validated square row-stochastic kernel: kernel(x, y) = Pr(Y = y | X = x).
class ReleasePolicy {
 public:
  // Rejects non-square or non-stochastic kernels, negative epsilon, and
  // alphabets of size < 2. For kCrr, additionally requires every diagonal
  // entry to dominate the rest of its column.
  static absl::StatusOr<ReleasePolicy> Create(PolicyKind kind, double epsilon,
                                              Matrix kernel);

  PolicyKind kind() const { return kind_; }
  double epsilon() const { return epsilon_; }
  const Matrix& kernel() const { return kernel_; }
  int size() const { return kernel_.rows(); }

 private:
  ReleasePolicy(PolicyKind kind, double epsilon, Matrix kernel)
      : kind_(kind), epsilon_(epsilon), kernel_(std::move(kernel)) {}

  PolicyKind kind_;
  double epsilon_;
  Matrix kernel_;
};

// Scale s of the conditional randomized response: move to y != x with
// probability s * belief(y), stay with 1 - s * (1 - belief(x)). It is the
// smallest s >= e^-eps that keeps every stay ratio (1 - s(1 - b)) / b at or
// below e^eps; for beliefs whose supported entries all reach
// 1 / (1 + e^eps) this is exactly e^-eps.
double CrrScale(const ProbVec& belief, double epsilon);

// Smallest supported belief entry for which the unclamped closed form
// (s = e^-eps) meets the eps bound: 1 / (1 + e^eps).
double CrrValidityThreshold(double epsilon);

// Conditional randomized response at the adaptive scale above. Every
// posterior/prior ratio lies in [e^-eps, e^eps] and the output marginal
// equals the belief. eps = 0 returns rows equal to the belief; eps >=
// kEpsilonInfinity returns the identity.
absl::StatusOr<ReleasePolicy> CrrPolicy(const ProbVec& belief, double epsilon);

// Conditional randomized response with s = e^-eps for every belief. Meets
// the eps bound only when every supported entry reaches
// CrrValidityThreshold(eps).
absl::StatusOr<ReleasePolicy> CrrClosedFormPolicy(const ProbVec& belief,
                                                  double epsilon);

// k-ary randomized response: stay with e^eps / (e^eps + k - 1).
absl::StatusOr<ReleasePolicy> RrLdpPolicy(int alphabet_size, double epsilon);

// Samples the output for `input` by inverse CDF over ascending output ids.
absl::StatusOr<int> PrivatizeStep(const ReleasePolicy& policy, int input,
                                  StreamRng& rng);

// JSON document {"kind", "epsilon", "kernel"}; parsing re-validates.
std::string PolicyToJson(const ReleasePolicy& policy);
absl::StatusOr<ReleasePolicy> PolicyFromJson(std::string_view text);

}  // namespace sip

#endif  // SIP_MECH_POLICY_H_
