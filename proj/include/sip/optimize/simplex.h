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

#ifndef SIP_OPTIMIZE_SIMPLEX_H_
#define SIP_OPTIMIZE_SIMPLEX_H_

#include <vector>

#include "absl/status/statusor.h"

namespace sip {

// minimize cost . x  subject to  rows, x >= 0.
struct LinearProgram {
  enum class Sense { kLessEqual, kEqual, kGreaterEqual };
  struct Row {
    std::vector<double> coeffs;  // length num_vars
    Sense sense;
    double rhs;
  };

  int num_vars = 0;
  std::vector<double> cost;
  std::vector<Row> rows;
};

struct LpSolution {
  std::vector<double> x;
  double objective = 0.0;
};

// Dense two-phase tableau simplex with Bland's anti-cycling rule. Intended
// for small problems (hundreds of rows and columns). Returns
// FailedPrecondition for infeasible programs, OutOfRange for unbounded
// ones, and ResourceExhausted if the pivot limit is hit.
absl::StatusOr<LpSolution> SolveLinearProgram(const LinearProgram& lp);

}  // namespace sip

#endif  // SIP_OPTIMIZE_SIMPLEX_H_
