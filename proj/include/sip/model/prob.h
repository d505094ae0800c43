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

#ifndef SIP_MODEL_PROB_H_
#define SIP_MODEL_PROB_H_

#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace sip {

// Maximum deviation of a probability sum from 1 that construction accepts
// (and then removes by renormalizing).
inline constexpr double kProbTolerance = 1e-9;

// A probability distribution over dense symbol ids 0..size-1.
class ProbVec {
 public:
  // Validates that entries are nonnegative and sum to 1 within
  // kProbTolerance, then renormalizes. Entries in [-kProbTolerance, 0) are
  // treated as rounding noise and clamped to 0.
  static absl::StatusOr<ProbVec> Create(std::vector<double> weights);

  // Scales nonnegative weights with a positive finite sum to a distribution.
  static absl::StatusOr<ProbVec> Normalize(std::vector<double> weights);

  static ProbVec Uniform(int size);
  static ProbVec PointMass(int size, int index);

  int size() const { return static_cast<int>(weights_.size()); }
  double operator[](int i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  explicit ProbVec(std::vector<double> weights) : weights_(std::move(weights)) {}

  std::vector<double> weights_;
};

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

  static absl::StatusOr<Matrix> FromRows(
      const std::vector<std::vector<double>>& rows);
  static Matrix Identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int r, int c) {
    return data_[static_cast<size_t>(r) * cols_ + c];
  }
  double operator()(int r, int c) const {
    return data_[static_cast<size_t>(r) * cols_ + c];
  }

  std::span<double> row(int r) {
    return {data_.data() + static_cast<size_t>(r) * cols_,
            static_cast<size_t>(cols_)};
  }
  std::span<const double> row(int r) const {
    return {data_.data() + static_cast<size_t>(r) * cols_,
            static_cast<size_t>(cols_)};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }
  std::vector<std::vector<double>> ToRows() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// OK iff every row is a valid distribution: entries >= -kProbTolerance and
// sum within kProbTolerance of 1.
absl::Status ValidateRowStochastic(const Matrix& m);

// Validates as above, then clamps rounding negatives and renormalizes rows.
absl::StatusOr<Matrix> NormalizeRows(Matrix m);

// Total-variation distance between two equally sized distributions.
double TotalVariation(std::span<const double> a, std::span<const double> b);

}  // namespace sip

#endif  // SIP_MODEL_PROB_H_
