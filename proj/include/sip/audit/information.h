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

#ifndef SIP_AUDIT_INFORMATION_H_
#define SIP_AUDIT_INFORMATION_H_

#include "absl/status/statusor.h"
#include "sip/model/prob.h"

namespace sip {

// I(A; B) in nats for a joint table joint(a, b), with 0 log 0 = 0. The
// table must be nonnegative and sum to 1 within kProbTolerance.
absl::StatusOr<double> MutualInformation(const Matrix& joint);

}  // namespace sip

#endif  // SIP_AUDIT_INFORMATION_H_
