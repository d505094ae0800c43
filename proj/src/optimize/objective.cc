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

#include "sip/optimize/objective.h"

#include <cmath>
#include <cstdlib>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "sip/model/rng.h"

namespace sip {
namespace {

constexpr double kMetricTolerance = 1e-12;
constexpr int kExhaustiveTriangleLimit = 128;
constexpr int kSampledTriples = 200000;

absl::Status CheckTriple(const Matrix& d, int a, int b, int c) {
  if (d(a, c) > d(a, b) + d(b, c) + kMetricTolerance) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "distance violates the triangle inequality at (%d, %d, %d)", a, b, c));
  }
  return absl::OkStatus();
}

}  // namespace

std::string_view DistanceKindName(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::kHamming:
      return "hamming";
    case DistanceKind::kAbsolute:
      return "absolute";
    case DistanceKind::kSquared:
      return "squared";
    case DistanceKind::kIndicatorBucket:
      return "indicator-bucket";
  }
  return "hamming";
}

absl::StatusOr<DistanceKind> ParseDistanceKind(std::string_view name) {
  for (DistanceKind kind :
       {DistanceKind::kHamming, DistanceKind::kAbsolute, DistanceKind::kSquared,
        DistanceKind::kIndicatorBucket}) {
    if (name == DistanceKindName(kind)) return kind;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown distance kind '", std::string(name), "'"));
}

absl::StatusOr<Matrix> BatchDistanceMatrix(int alphabet_size, int width,
                                           DistanceKind kind,
                                           const QueryMap& query) {
  if (alphabet_size < 2 || width < 1) {
    return absl::InvalidArgumentError("need alphabet >= 2 and width >= 1");
  }
  if (!query.bucket.empty() &&
      static_cast<int>(query.bucket.size()) != alphabet_size) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "bucket map has %d entries for an alphabet of %d", query.bucket.size(),
        alphabet_size));
  }
  double count = std::pow(static_cast<double>(alphabet_size), width);
  if (count > 4096) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%d^%d batches is too many for a dense distance matrix", alphabet_size,
        width));
  }
  const int n = static_cast<int>(count);
  Matrix d(n, n);
  for (int o = 0; o < n; ++o) {
    for (int r = 0; r < n; ++r) {
      double total = 0.0;
      int a = o;
      int b = r;
      for (int i = 0; i < width; ++i) {
        const int qa = query.Apply(a % alphabet_size);
        const int qb = query.Apply(b % alphabet_size);
        a /= alphabet_size;
        b /= alphabet_size;
        const double diff = std::abs(qa - qb);
        switch (kind) {
          case DistanceKind::kHamming:
          case DistanceKind::kIndicatorBucket:
            total += qa != qb ? 1.0 : 0.0;
            break;
          case DistanceKind::kAbsolute:
            total += diff;
            break;
          case DistanceKind::kSquared:
            total += diff * diff;
            break;
        }
      }
      if (kind == DistanceKind::kIndicatorBucket) total = total > 0 ? 1.0 : 0.0;
      d(o, r) = total;
    }
  }
  return d;
}

absl::Status ValidateMetric(const Matrix& d) {
  const int n = d.rows();
  if (d.cols() != n || n == 0) {
    return absl::InvalidArgumentError("distance matrix must be square");
  }
  for (int a = 0; a < n; ++a) {
    if (d(a, a) != 0.0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("distance diagonal entry %d is nonzero", a));
    }
    for (int b = 0; b < n; ++b) {
      if (!(d(a, b) >= 0.0) || !std::isfinite(d(a, b))) {
        return absl::InvalidArgumentError(
            absl::StrFormat("distance (%d, %d) is negative or not finite", a, b));
      }
      if (std::abs(d(a, b) - d(b, a)) > kMetricTolerance) {
        return absl::InvalidArgumentError(
            absl::StrFormat("distance is not symmetric at (%d, %d)", a, b));
      }
    }
  }
  if (n <= kExhaustiveTriangleLimit) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int c = 0; c < n; ++c) {
          if (absl::Status s = CheckTriple(d, a, b, c); !s.ok()) return s;
        }
      }
    }
    return absl::OkStatus();
  }
  StreamRng rng(0x7269616e676c65, 0);
  for (int t = 0; t < kSampledTriples; ++t) {
    const int a = static_cast<int>(rng.NextBits() % n);
    const int b = static_cast<int>(rng.NextBits() % n);
    const int c = static_cast<int>(rng.NextBits() % n);
    if (absl::Status s = CheckTriple(d, a, b, c); !s.ok()) return s;
  }
  return absl::OkStatus();
}

absl::StatusOr<BatchObjective> BatchObjective::Create(Matrix distance,
                                                      ProbVec belief,
                                                      double epsilon) {
  if (std::isnan(epsilon) || epsilon < 0.0) {
    return absl::InvalidArgumentError("epsilon must be >= 0");
  }
  if (belief.size() < 2) {
    return absl::InvalidArgumentError(
        "release mechanisms need an alphabet of at least 2 symbols");
  }
  if (distance.rows() != belief.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "distance is %dx%d but the belief has %d entries", distance.rows(),
        distance.cols(), belief.size()));
  }
  if (absl::Status s = ValidateMetric(distance); !s.ok()) return s;
  return BatchObjective(std::move(distance), std::move(belief), epsilon);
}

double BatchObjective::Value(const Matrix& kernel) const {
  double total = 0.0;
  for (int o = 0; o < size(); ++o) {
    if (belief_[o] == 0.0) continue;
    double row = 0.0;
    for (int r = 0; r < size(); ++r) row += kernel(o, r) * distance_(o, r);
    total += belief_[o] * row;
  }
  return total;
}

Matrix BatchObjective::Gradient() const {
  Matrix g(size(), size());
  for (int o = 0; o < size(); ++o) {
    for (int r = 0; r < size(); ++r) g(o, r) = belief_[o] * distance_(o, r);
  }
  return g;
}

}  // namespace sip
