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

#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "sip/audit/distortion.h"
#include "sip/audit/information.h"
#include "sip/audit/leakage.h"
#include "sip/audit/parallel.h"
#include "sip/belief/belief.h"
#include "sip/mech/policy.h"
#include "sip/mech/stream.h"
#include "sip/model/markov.h"
#include "sip/model/rng.h"
#include "sip/optimize/objective.h"

namespace sip {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MarkovModel Binary(double p1, double stay) {
  return MarkovModel::BinarySymmetric(p1, stay).value();
}

MarkovModel RandomBinary(StreamRng& rng) {
  const double p1 = 0.05 + 0.9 * rng.Uniform();
  const double q00 = 0.05 + 0.9 * rng.Uniform();
  const double q11 = 0.05 + 0.9 * rng.Uniform();
  return MarkovModel::Create({1 - p1, p1}, {{q00, 1 - q00}, {1 - q11, q11}})
      .value();
}

MarkovModel RandomTernary(StreamRng& rng) {
  auto draw = [&rng] {
    std::vector<double> w(3);
    for (double& p : w) p = 0.1 + rng.Uniform();
    return ProbVec::Normalize(w)->weights();
  };
  std::vector<double> prior = draw();
  return MarkovModel::Create(prior, {draw(), draw(), draw()}).value();
}

std::vector<int> Digits(int64_t code, int n, int length) {
  std::vector<int> out(length);
  for (int i = length - 1; i >= 0; --i) {
    out[i] = static_cast<int>(code % n);
    code /= n;
  }
  return out;
}

// Every metric recomputed from the full joint table of (x_1^T, y_1^T). The
// policy at each step comes from the mechanism applied to the belief
// obtained by conditioning that table directly.
struct Oracle {
  double sil = 0.0;
  double ldp = 0.0;
  double mi = 0.0;
  double exceed = 0.0;
};

Oracle BruteForce(const MarkovModel& model, const StreamMechanism& mech,
                  int horizon, double threshold) {
  const int n = model.alphabet_size();
  const int64_t count = static_cast<int64_t>(std::pow(n, horizon));
  // likelihood[y][x] = Pr(y | x).
  std::vector<std::vector<double>> like(count, std::vector<double>(count, 1.0));
  std::vector<double> px(count);
  for (int64_t xc = 0; xc < count; ++xc) {
    px[xc] = model.SequenceProbability(Digits(xc, n, horizon));
  }
  for (int64_t yc = 0; yc < count; ++yc) {
    const std::vector<int> y = Digits(yc, n, horizon);
    for (int k = 0; k < horizon; ++k) {
      // Belief over x_k given y_1..y_(k-1), from the joint.
      std::vector<double> b(n, 0.0);
      for (int64_t xc = 0; xc < count; ++xc) {
        b[Digits(xc, n, horizon)[k]] += px[xc] * like[yc][xc];
      }
      absl::StatusOr<ProbVec> belief = ProbVec::Normalize(b);
      if (!belief.ok()) {
        for (int64_t xc = 0; xc < count; ++xc) like[yc][xc] = 0.0;
        break;
      }
      const Matrix a = mech.PolicyAt(k, *belief)->kernel();
      for (int64_t xc = 0; xc < count; ++xc) {
        like[yc][xc] *= a(Digits(xc, n, horizon)[k], y[k]);
      }
    }
  }
  Oracle o;
  for (int64_t yc = 0; yc < count; ++yc) {
    double py = 0.0;
    for (int64_t xc = 0; xc < count; ++xc) py += px[xc] * like[yc][xc];
    if (!(py > 0.0)) continue;
    double hi = 0.0;
    double lo = kInf;
    for (int64_t xc = 0; xc < count; ++xc) {
      hi = std::max(hi, like[yc][xc]);
      lo = std::min(lo, like[yc][xc]);
      if (px[xc] == 0.0) continue;
      const double l = like[yc][xc];
      if (l == 0.0) {
        o.sil = kInf;
        continue;
      }
      const double leak = std::log(l / py);
      o.sil = std::max(o.sil, std::abs(leak));
      o.mi += px[xc] * l * leak;
      if (std::abs(leak) > threshold + 1e-9) o.exceed += px[xc] * l;
    }
    o.ldp = std::max(o.ldp, lo > 0 ? std::log(hi / lo) : kInf);
  }
  return o;
}

CrrMechanism Crr(int n, double eps, int t) {
  return CrrMechanism::Create(n, std::vector<double>(t, eps)).value();
}

TEST(IilTest, CrrSitsOnTheBandEdge) {
  StreamRng rng(1, 0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> w(2 + trial % 3);
    for (double& x : w) x = 0.05 + rng.Uniform();
    ProbVec b = ProbVec::Normalize(w).value();
    const double eps = 0.1 + 3 * rng.Uniform();
    EXPECT_NEAR(IilExact(b, CrrPolicy(b, eps)->kernel()), eps, 1e-9);
  }
}

TEST(IilTest, UniformRowsAndRrLdp) {
  ProbVec b = ProbVec::Create({0.2, 0.8}).value();
  EXPECT_EQ(IilExact(b, Matrix(2, 2, 0.5)), 0.0);
  for (double eps : {0.1, 1.0, 3.0}) {
    EXPECT_LE(IilExact(ProbVec::Uniform(4), RrLdpPolicy(4, eps)->kernel()),
              eps + 1e-12);
  }
}

TEST(BilTest, IdentityKernelAndWidthOne) {
  ProbVec b = ProbVec::Create({0.1, 0.2, 0.3, 0.4}).value();
  EXPECT_EQ(BilExact(b, Matrix::Identity(4)), kInf);
  // A point-mass belief has no cross terms: log(1 / 1) = 0.
  EXPECT_EQ(BilExact(ProbVec::PointMass(4, 2), Matrix::Identity(4)), 0.0);
  ProbVec two = ProbVec::Create({0.3, 0.7}).value();
  const Matrix k = CrrPolicy(two, 0.4)->kernel();
  EXPECT_EQ(BilExact(two, k), IilExact(two, k));
}

TEST(SilTest, ConstantAndIdentityPolicies) {
  MarkovModel m = Binary(0.3, 0.7);
  FixedPolicyMechanism constant(
      ReleasePolicy::Create(PolicyKind::kCustom, 0.0,
                            Matrix::FromRows({{0.6, 0.4}, {0.6, 0.4}}).value())
          .value(),
      4);
  EXPECT_NEAR(SilExact(m, constant, 4).value(), 0.0, 1e-12);
  EXPECT_NEAR(LdpLogRatio(m, constant, 4).value(), 0.0, 1e-12);
  FixedPolicyMechanism identity(
      ReleasePolicy::Create(PolicyKind::kCustom, 50.0, Matrix::Identity(2)).value(),
      4);
  EXPECT_EQ(SilExact(m, identity, 4).value(), kInf);
}

TEST(SilTest, CrrQ07HorizonFour) {
  MarkovModel m = Binary(0.5, 0.7);
  CrrMechanism mech = Crr(2, 0.3, 4);
  LeakageReport r = AuditExact(m, mech, 4).value();
  EXPECT_LE(r.sil, 1.2 + 1e-9);
  EXPECT_LE(r.sil, r.IilSum() + 1e-9);
  Oracle o = BruteForce(m, mech, 4, 1.2);
  EXPECT_NEAR(r.sil, o.sil, 1e-9);
  EXPECT_NEAR(r.ldp_log_ratio, o.ldp, 1e-9);
  EXPECT_NEAR(*r.mutual_information, o.mi, 1e-12);
  EXPECT_NEAR(*r.exceed_mass, o.exceed, 1e-12);
}

// The audit agrees with the joint-table oracle for random chains,
// alphabets and mechanisms.
TEST(AuditExactTest, MatchesBruteForceOracle) {
  StreamRng rng(9, 0);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + trial % 2;
    MarkovModel m = n == 2 ? RandomBinary(rng) : RandomTernary(rng);
    const int horizon = n == 2 ? 4 : 3;
    const double eps = 0.2 + rng.Uniform();
    std::unique_ptr<StreamMechanism> mech;
    if (trial % 4 == 3) {
      mech = std::make_unique<RrLdpMechanism>(
          RrLdpMechanism::Create(n, std::vector<double>(horizon, eps)).value());
    } else {
      mech = std::make_unique<CrrMechanism>(Crr(n, eps, horizon));
    }
    LeakageReport r = AuditExact(m, *mech, horizon).value();
    Oracle o = BruteForce(m, *mech, horizon, eps * horizon);
    EXPECT_NEAR(r.sil, o.sil, 1e-9);
    EXPECT_NEAR(r.ldp_log_ratio, o.ldp, 1e-9);
    EXPECT_NEAR(*r.mutual_information, o.mi, 1e-12);
    EXPECT_NEAR(*r.exceed_mass, o.exceed, 1e-12);
    EXPECT_LE(*r.mutual_information, r.sil + 1e-12);
  }
}

TEST(AuditExactTest, CompositionAndLdpRelation) {
  StreamRng rng(10, 0);
  for (int trial = 0; trial < 20; ++trial) {
    MarkovModel m = RandomBinary(rng);
    const int horizon = 1 + trial % 6;
    std::vector<double> schedule(horizon);
    for (double& e : schedule) e = 0.05 + rng.Uniform();
    CrrMechanism mech = CrrMechanism::Create(2, schedule).value();
    LeakageReport r = AuditExact(m, mech, horizon).value();
    EXPECT_LE(r.sil, r.IilSum() + 1e-9);
    EXPECT_LE(r.sil, r.EpsilonTotal() + 1e-9);
    for (int k = 0; k < horizon; ++k) {
      EXPECT_LE(r.iil_per_step[k], schedule[k] + 1e-9);
    }
    EXPECT_LE(r.ldp_log_ratio, 2 * r.sil + 1e-9);
  }
}

TEST(AuditExactTest, RrLdpComposesExactly) {
  MarkovModel m = Binary(0.6, 0.8);
  for (int t : {1, 3, 5}) {
    RrLdpMechanism mech =
        RrLdpMechanism::Create(2, std::vector<double>(t, 1.5 / t)).value();
    LeakageReport r = AuditExact(m, mech, t).value();
    EXPECT_NEAR(r.ldp_log_ratio, 1.5, 1e-12);
    EXPECT_LE(r.sil, 1.5 + 1e-9);
  }
}

TEST(AuditExactTest, ThreadCountDoesNotChangeResults) {
  MarkovModel m = Binary(0.4, 0.85);
  CrrMechanism mech = Crr(2, 0.4, 8);
  AuditOptions one;
  AuditOptions four;
  four.threads = 4;
  LeakageReport a = AuditExact(m, mech, 8, one).value();
  LeakageReport b = AuditExact(m, mech, 8, four).value();
  EXPECT_EQ(a.sil, b.sil);
  EXPECT_EQ(a.ldp_log_ratio, b.ldp_log_ratio);
  EXPECT_EQ(a.iil_per_step, b.iil_per_step);
  EXPECT_NEAR(*a.mutual_information, *b.mutual_information, 1e-12);
}

TEST(AuditExactTest, BudgetAndShapeErrors) {
  MarkovModel m = Binary(0.5, 0.5);
  CrrMechanism mech = Crr(2, 0.3, 30);
  EXPECT_EQ(AuditExact(m, mech, 21).status().code(),
            absl::StatusCode::kResourceExhausted);
  EXPECT_FALSE(AuditExact(m, mech, 0).ok());
  CrrMechanism short_mech = Crr(2, 0.3, 2);
  EXPECT_FALSE(AuditExact(m, short_mech, 3).ok());
  CrrMechanism wide = Crr(3, 0.3, 2);
  EXPECT_FALSE(AuditExact(m, wide, 2).ok());
}

TEST(AuditExactTest, SilMonotoneInBudget) {
  MarkovModel m = Binary(0.9, 0.9);
  double prev_sil = kInf;
  for (double eps : {2.0, 1.5, 1.0, 0.5, 0.25, 0.0}) {
    CrrMechanism mech = Crr(2, eps, 4);
    const double sil = SilExact(m, mech, 4).value();
    EXPECT_LE(sil, prev_sil + 1e-12);
    prev_sil = sil;
  }
  EXPECT_NEAR(prev_sil, 0.0, 1e-12);
}

TEST(AuditMonteCarloTest, BelowExactAndDeterministic) {
  MarkovModel m = Binary(0.5, 0.7);
  CrrMechanism mech = Crr(2, 0.3, 4);
  LeakageReport exact = AuditExact(m, mech, 4).value();
  LeakageReport mc = AuditMonteCarlo(m, mech, 4, 20000, 5).value();
  AuditOptions threaded;
  threaded.threads = 3;
  LeakageReport again = AuditMonteCarlo(m, mech, 4, 20000, 5, threaded).value();
  EXPECT_FALSE(mc.exact);
  EXPECT_EQ(mc.samples, 20000);
  EXPECT_LE(mc.sil, exact.sil + 1e-12);
  EXPECT_GT(mc.sil, 0.5 * exact.sil);
  EXPECT_EQ(mc.sil, again.sil);
  EXPECT_DOUBLE_EQ(*mc.mutual_information, *again.mutual_information);
  EXPECT_NEAR(*mc.mutual_information, *exact.mutual_information, 0.01);
}

TEST(VisitHistoriesTest, VisitsEveryPositivePrefix) {
  MarkovModel m = Binary(0.5, 0.7);
  CrrMechanism mech = Crr(2, 0.3, 3);
  std::map<int, int> per_step;
  double mass_at_two = 0.0;
  ASSERT_TRUE(VisitHistories(m, mech, 3, [&](const HistoryView& h) {
                ++per_step[h.step];
                if (h.step == 2) mass_at_two += h.prefix_probability;
                EXPECT_EQ(static_cast<int>(h.released.size()), h.step);
                return absl::OkStatus();
              }).ok());
  EXPECT_EQ(per_step[0], 1);
  EXPECT_EQ(per_step[1], 2);
  EXPECT_EQ(per_step[2], 4);
  EXPECT_NEAR(mass_at_two, 1.0, 1e-12);
}

TEST(MutualInformationTest, ClosedForms) {
  EXPECT_NEAR(MutualInformation(Matrix(2, 2, 0.25)).value(), 0.0, 1e-15);
  EXPECT_NEAR(
      MutualInformation(Matrix::FromRows({{0.5, 0.0}, {0.0, 0.5}}).value()).value(),
      std::log(2.0), 1e-15);
  EXPECT_FALSE(MutualInformation(Matrix(2, 2, 0.3)).ok());
  EXPECT_FALSE(
      MutualInformation(Matrix::FromRows({{1.5, -0.5}, {0, 0}}).value()).ok());
}

TEST(DistortionTest, IdentityAndZeroBudget) {
  MarkovModel m = Binary(0.5, 0.5);
  Matrix hamming = BatchDistanceMatrix(2, 1, DistanceKind::kHamming).value();
  FixedPolicyMechanism identity(
      ReleasePolicy::Create(PolicyKind::kCustom, 50.0, Matrix::Identity(2)).value(),
      5);
  EXPECT_EQ(ExactDistortion(m, identity, hamming, 5)->mean, 0.0);
  CrrMechanism zero = Crr(2, 0.0, 5);
  DistortionReport r = ExactDistortion(m, zero, hamming, 5).value();
  for (double d : r.per_step) EXPECT_NEAR(d, 0.5, 1e-15);
}

TEST(DistortionTest, MonteCarloAgreesWithExact) {
  MarkovModel m = Binary(0.9, 0.9);
  Matrix hamming = BatchDistanceMatrix(2, 1, DistanceKind::kHamming).value();
  CrrMechanism mech = Crr(2, 0.6, 3);
  DistortionReport exact = ExactDistortion(m, mech, hamming, 3).value();
  DistortionReport mc = MonteCarloDistortion(m, StreamReleaser(m, mech), hamming,
                                             3, 1000000, 17, 2)
                            .value();
  EXPECT_FALSE(mc.exact);
  EXPECT_GT(mc.standard_error, 0.0);
  EXPECT_LT(std::abs(mc.mean - exact.mean), 3 * mc.standard_error);
}

TEST(DistortionTest, MonotoneInBudget) {
  MarkovModel m = Binary(0.9, 0.9);
  Matrix hamming = BatchDistanceMatrix(2, 1, DistanceKind::kHamming).value();
  double prev = -1.0;
  for (double eps : {3.0, 2.0, 1.0, 0.5, 0.0}) {
    CrrMechanism mech = Crr(2, eps, 5);
    const double d = ExactDistortion(m, mech, hamming, 5)->mean;
    EXPECT_GE(d, prev - 1e-12);
    prev = d;
  }
}

// Under CRR the released symbol at each step has the model's marginal.
TEST(DistortionTest, CrrPreservesOutputMarginals) {
  MarkovModel m = Binary(0.9, 0.8);
  CrrMechanism mech = Crr(2, 0.5, 4);
  const int samples = 200000;
  std::vector<double> ones(4, 0.0);
  for (int i = 0; i < samples; ++i) {
    StreamRng rng(21, i);
    std::vector<int> x = SampleSequence(m, 4, rng);
    std::vector<int> y = PrivatizeStream(m, mech, x, rng).value();
    for (int k = 0; k < 4; ++k) ones[k] += y[k];
  }
  ProbVec marginal = m.prior();
  for (int k = 0; k < 4; ++k) {
    const double p = marginal[1];
    const double se = std::sqrt(p * (1 - p) / samples);
    EXPECT_NEAR(ones[k] / samples, p, 4 * se) << "step " << k;
    marginal = m.Predict(marginal);
  }
}

TEST(ReportTest, JsonAndCsv) {
  LeakageReport r;
  r.horizon = 2;
  r.sil = kInf;
  r.iil_per_step = {0.1, 0.2};
  r.epsilon_per_step = {0.3, 0.3};
  nlohmann::json doc = nlohmann::json::parse(ReportToJson(r));
  EXPECT_EQ(doc["sil"], "inf");
  EXPECT_EQ(doc["method"], "exact");
  EXPECT_DOUBLE_EQ(doc["epsilon_total"].get<double>(), 0.6);
  const std::string csv = ReportToCsv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "step,epsilon,iil");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(ParallelTest, CoversEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  ParallelFor(1000, 4, [&](int i) { ++hits[i]; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_GE(ResolveThreads(0), 1);
  EXPECT_EQ(ResolveThreads(3), 3);
}

}  // namespace
}  // namespace sip
