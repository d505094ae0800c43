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

#include "sip/audit/distortion.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_format.h"
#include "sip/audit/leakage.h"
#include "sip/audit/parallel.h"

namespace sip {
namespace {

absl::Status CheckDistance(const Matrix& distance, int alphabet_size) {
  if (distance.rows() != alphabet_size || distance.cols() != alphabet_size) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "distance is %dx%d for an alphabet of %d", distance.rows(),
        distance.cols(), alphabet_size));
  }
  return absl::OkStatus();
}

struct Chunk {
  std::vector<double> per_step;
  double sum = 0.0;
  double sum_sq = 0.0;
  absl::Status status;
};

}  // namespace

Releaser StreamReleaser(const MarkovModel& model, const StreamMechanism& mech) {
  return [&model, &mech](std::span<const int> input, StreamRng& rng) {
    return PrivatizeStream(model, mech, input, rng);
  };
}

absl::StatusOr<DistortionReport> MonteCarloDistortion(
    const MarkovModel& model, const Releaser& release,
    const Matrix& symbol_distance, int horizon, int samples, uint64_t seed,
    int threads) {
  if (horizon < 1) return absl::InvalidArgumentError("horizon must be >= 1");
  if (samples < 1) return absl::InvalidArgumentError("samples must be >= 1");
  if (absl::Status s = CheckDistance(symbol_distance, model.alphabet_size());
      !s.ok()) {
    return s;
  }
  // Fixed chunking keeps the floating-point sums independent of threads.
  const int chunks = std::min(samples, 64);
  std::vector<Chunk> parts(chunks);
  ParallelFor(chunks, threads, [&](int c) {
    Chunk& part = parts[c];
    part.per_step.assign(horizon, 0.0);
    const int begin = static_cast<int>(static_cast<int64_t>(samples) * c / chunks);
    const int end =
        static_cast<int>(static_cast<int64_t>(samples) * (c + 1) / chunks);
    for (int i = begin; i < end; ++i) {
      StreamRng rng(seed, static_cast<uint64_t>(i));
      std::vector<int> x = SampleSequence(model, horizon, rng);
      absl::StatusOr<std::vector<int>> y = release(x, rng);
      if (!y.ok()) {
        part.status = y.status();
        return;
      }
      if (static_cast<int>(y->size()) != horizon) {
        part.status = absl::InternalError("release changed the stream length");
        return;
      }
      double stream = 0.0;
      for (int k = 0; k < horizon; ++k) {
        const double d = symbol_distance(x[k], (*y)[k]);
        part.per_step[k] += d;
        stream += d;
      }
      stream /= horizon;
      part.sum += stream;
      part.sum_sq += stream * stream;
    }
  });
  DistortionReport report;
  report.exact = false;
  report.samples = samples;
  report.per_step.assign(horizon, 0.0);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const Chunk& part : parts) {
    if (!part.status.ok()) return part.status;
    for (int k = 0; k < horizon; ++k) report.per_step[k] += part.per_step[k];
    sum += part.sum;
    sum_sq += part.sum_sq;
  }
  for (double& v : report.per_step) v /= samples;
  report.mean = sum / samples;
  if (samples > 1) {
    const double var =
        std::max(0.0, (sum_sq - samples * report.mean * report.mean) /
                          (samples - 1));
    report.standard_error = std::sqrt(var / samples);
  }
  return report;
}

absl::StatusOr<DistortionReport> ExactDistortion(const MarkovModel& model,
                                                 const StreamMechanism& mech,
                                                 const Matrix& distance,
                                                 int horizon) {
  if (absl::Status s = CheckDistance(distance, model.alphabet_size());
      !s.ok()) {
    return s;
  }
  DistortionReport report;
  report.per_step.assign(horizon, 0.0);
  absl::Status status = VisitHistories(
      model, mech, horizon, [&](const HistoryView& view) {
        const Matrix& a = view.policy->kernel();
        double total = 0.0;
        for (int x = 0; x < a.rows(); ++x) {
          if (view.joint[x] == 0.0) continue;
          double row = 0.0;
          for (int y = 0; y < a.cols(); ++y) row += a(x, y) * distance(x, y);
          total += view.joint[x] * row;
        }
        report.per_step[view.step] += total;
        return absl::OkStatus();
      });
  if (!status.ok()) return status;
  double sum = 0.0;
  for (double v : report.per_step) sum += v;
  report.mean = sum / horizon;
  return report;
}

}  // namespace sip
