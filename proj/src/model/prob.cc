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

#include "sip/model/prob.h"

#include <cmath>

#include "absl/strings/str_format.h"

namespace sip {
namespace {

// Checks one distribution and returns its sum.
absl::StatusOr<double> CheckDistribution(std::span<const double> w) {
  if (w.empty()) {
    return absl::InvalidArgumentError("distribution must be nonempty");
  }
  double sum = 0.0;
  for (size_t i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i]) || w[i] < -kProbTolerance) {
      return absl::InvalidArgumentError(
          absl::StrFormat("entry %d is %g; must be a nonnegative number", i,
                          w[i]));
    }
    sum += w[i];
  }
  if (std::abs(sum - 1.0) > kProbTolerance) {
    return absl::InvalidArgumentError(
        absl::StrFormat("entries sum to %.12g, not 1", sum));
  }
  return sum;
}

void ClampAndScale(std::span<double> w) {
  double sum = 0.0;
  for (double& v : w) {
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  for (double& v : w) v /= sum;
}

}  // namespace

absl::StatusOr<ProbVec> ProbVec::Create(std::vector<double> weights) {
  absl::StatusOr<double> sum = CheckDistribution(weights);
  if (!sum.ok()) return sum.status();
  ClampAndScale(weights);
  return ProbVec(std::move(weights));
}

absl::StatusOr<ProbVec> ProbVec::Normalize(std::vector<double> weights) {
  if (weights.empty()) {
    return absl::InvalidArgumentError("distribution must be nonempty");
  }
  double sum = 0.0;
  for (double v : weights) {
    if (!std::isfinite(v) || v < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("cannot normalize weight %g", v));
    }
    sum += v;
  }
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    return absl::FailedPreconditionError(
        "cannot normalize weights with zero total mass");
  }
  for (double& v : weights) v /= sum;
  return ProbVec(std::move(weights));
}

ProbVec ProbVec::Uniform(int size) {
  return ProbVec(std::vector<double>(size, 1.0 / size));
}

ProbVec ProbVec::PointMass(int size, int index) {
  std::vector<double> w(size, 0.0);
  w[index] = 1.0;
  return ProbVec(std::move(w));
}

absl::StatusOr<Matrix> Matrix::FromRows(
    const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return absl::InvalidArgumentError("matrix has no rows");
  const size_t cols = rows.front().size();
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(cols));
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "row %d has %d entries, expected %d", r, rows[r].size(), cols));
    }
    for (size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

Matrix Matrix::Identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<std::vector<double>> Matrix::ToRows() const {
  std::vector<std::vector<double>> out(rows_);
  for (int r = 0; r < rows_; ++r) out[r].assign(row(r).begin(), row(r).end());
  return out;
}

absl::Status ValidateRowStochastic(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) {
    return absl::InvalidArgumentError("matrix is empty");
  }
  for (int r = 0; r < m.rows(); ++r) {
    absl::StatusOr<double> sum = CheckDistribution(m.row(r));
    if (!sum.ok()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("row %d: %s", r, sum.status().message()));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<Matrix> NormalizeRows(Matrix m) {
  if (absl::Status s = ValidateRowStochastic(m); !s.ok()) return s;
  for (int r = 0; r < m.rows(); ++r) ClampAndScale(m.row(r));
  return m;
}

double TotalVariation(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return 0.5 * sum;
}

}  // namespace sip
