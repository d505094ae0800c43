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

#include "sip/mech/policy.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"

namespace sip {
namespace {

using json = nlohmann::json;

absl::Status CheckEpsilon(double epsilon) {
  if (std::isnan(epsilon) || epsilon < 0.0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("epsilon must be >= 0, got %g", epsilon));
  }
  return absl::OkStatus();
}

absl::Status CheckBelief(const ProbVec& belief) {
  if (belief.size() < 2) {
    return absl::InvalidArgumentError(
        "release mechanisms need an alphabet of at least 2 symbols");
  }
  return absl::OkStatus();
}

// Builds the kernel with off-diagonal s * belief(y).
Matrix CrrKernel(const ProbVec& belief, double s) {
  const int n = belief.size();
  Matrix kernel(n, n);
  for (int x = 0; x < n; ++x) {
    std::span<double> row = kernel.row(x);
    for (int y = 0; y < n; ++y) row[y] = s * belief[y];
    row[x] = 1.0 - s * (1.0 - belief[x]);
  }
  return kernel;
}

}  // namespace

std::string_view PolicyKindName(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kCrr:
      return "crr";
    case PolicyKind::kRrLdp:
      return "rr_ldp";
    case PolicyKind::kBatched:
      return "batched";
    case PolicyKind::kCustom:
      return "custom";
  }
  return "custom";
}

absl::StatusOr<PolicyKind> ParsePolicyKind(std::string_view name) {
  for (PolicyKind kind : {PolicyKind::kCrr, PolicyKind::kRrLdp,
                          PolicyKind::kBatched, PolicyKind::kCustom}) {
    if (name == PolicyKindName(kind)) return kind;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown policy kind '", std::string(name), "'"));
}

absl::StatusOr<ReleasePolicy> ReleasePolicy::Create(PolicyKind kind,
                                                    double epsilon,
                                                    Matrix kernel) {
  if (absl::Status s = CheckEpsilon(epsilon); !s.ok()) return s;
  if (kernel.rows() != kernel.cols()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "kernel must be square, got %dx%d", kernel.rows(), kernel.cols()));
  }
  if (kernel.rows() < 2) {
    return absl::InvalidArgumentError(
        "release mechanisms need an alphabet of at least 2 symbols");
  }
  absl::StatusOr<Matrix> rows = NormalizeRows(std::move(kernel));
  if (!rows.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid kernel: ", rows.status().message()));
  }
  if (kind == PolicyKind::kCrr) {
    const Matrix& k = *rows;
    for (int y = 0; y < k.cols(); ++y) {
      for (int x = 0; x < k.rows(); ++x) {
        if (k(x, y) > k(y, y) + 1e-12) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "crr kernel: entry (%d,%d) exceeds the diagonal of column %d",
              x, y, y));
        }
      }
    }
  }
  return ReleasePolicy(kind, epsilon, *std::move(rows));
}

double CrrScale(const ProbVec& belief, double epsilon) {
  const double e = std::exp(epsilon);
  double s = std::exp(-epsilon);
  for (int x = 0; x < belief.size(); ++x) {
    const double b = belief[x];
    if (b > 0.0 && b < 1.0) s = std::max(s, (1.0 - e * b) / (1.0 - b));
  }
  return std::min(s, 1.0);
}

double CrrValidityThreshold(double epsilon) {
  return 1.0 / (1.0 + std::exp(epsilon));
}

absl::StatusOr<ReleasePolicy> CrrPolicy(const ProbVec& belief,
                                        double epsilon) {
  if (absl::Status s = CheckEpsilon(epsilon); !s.ok()) return s;
  if (absl::Status s = CheckBelief(belief); !s.ok()) return s;
  if (epsilon >= kEpsilonInfinity) {
    return ReleasePolicy::Create(PolicyKind::kCrr, epsilon,
                                 Matrix::Identity(belief.size()));
  }
  return ReleasePolicy::Create(PolicyKind::kCrr, epsilon,
                               CrrKernel(belief, CrrScale(belief, epsilon)));
}

absl::StatusOr<ReleasePolicy> CrrClosedFormPolicy(const ProbVec& belief,
                                                  double epsilon) {
  if (absl::Status s = CheckEpsilon(epsilon); !s.ok()) return s;
  if (absl::Status s = CheckBelief(belief); !s.ok()) return s;
  if (epsilon >= kEpsilonInfinity) {
    return ReleasePolicy::Create(PolicyKind::kCrr, epsilon,
                                 Matrix::Identity(belief.size()));
  }
  return ReleasePolicy::Create(PolicyKind::kCrr, epsilon,
                               CrrKernel(belief, std::exp(-epsilon)));
}

absl::StatusOr<ReleasePolicy> RrLdpPolicy(int alphabet_size, double epsilon) {
  if (absl::Status s = CheckEpsilon(epsilon); !s.ok()) return s;
  if (alphabet_size < 2) {
    return absl::InvalidArgumentError(
        "release mechanisms need an alphabet of at least 2 symbols");
  }
  const int k = alphabet_size;
  Matrix kernel(k, k);
  if (epsilon >= kEpsilonInfinity) {
    kernel = Matrix::Identity(k);
  } else {
    const double e = std::exp(epsilon);
    const double stay = e / (e + k - 1);
    const double move = 1.0 / (e + k - 1);
    for (int x = 0; x < k; ++x) {
      for (int y = 0; y < k; ++y) kernel(x, y) = x == y ? stay : move;
    }
  }
  return ReleasePolicy::Create(PolicyKind::kRrLdp, epsilon, std::move(kernel));
}

absl::StatusOr<int> PrivatizeStep(const ReleasePolicy& policy, int input,
                                  StreamRng& rng) {
  if (input < 0 || input >= policy.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "input symbol %d outside alphabet of size %d", input, policy.size()));
  }
  return SampleIndex(policy.kernel().row(input), rng.Uniform());
}

std::string PolicyToJson(const ReleasePolicy& policy) {
  json doc;
  doc["kind"] = std::string(PolicyKindName(policy.kind()));
  doc["epsilon"] = policy.epsilon();
  doc["kernel"] = policy.kernel().ToRows();
  return doc.dump(2) + "\n";
}

absl::StatusOr<ReleasePolicy> PolicyFromJson(std::string_view text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("policy document is not a JSON object");
  }
  try {
    absl::StatusOr<PolicyKind> kind =
        ParsePolicyKind(doc.at("kind").get<std::string>());
    if (!kind.ok()) return kind.status();
    absl::StatusOr<Matrix> kernel = Matrix::FromRows(
        doc.at("kernel").get<std::vector<std::vector<double>>>());
    if (!kernel.ok()) return kernel.status();
    return ReleasePolicy::Create(*kind, doc.at("epsilon").get<double>(),
                                 *std::move(kernel));
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed policy document: ", e.what()));
  }
}

}  // namespace sip
