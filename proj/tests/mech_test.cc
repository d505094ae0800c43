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
#include <vector>

#include "gtest/gtest.h"
#include "sip/audit/leakage.h"
#include "sip/belief/belief.h"
#include "sip/mech/budget.h"
#include "sip/mech/policy.h"
#include "sip/mech/stream.h"
#include "sip/model/markov.h"
#include "sip/model/rng.h"

namespace sip {
namespace {

ProbVec RandomBelief(int n, StreamRng& rng, bool allow_zero = false) {
  std::vector<double> w(n);
  for (double& x : w) {
    x = rng.Uniform();
    if (allow_zero && rng.Uniform() < 0.2) x = 0.0;
  }
  w[rng.NextBits() % n] += 0.01;
  return ProbVec::Normalize(w).value();
}

TEST(CrrPolicyTest, HandEvaluationAtLn2) {
  ReleasePolicy p = CrrPolicy(ProbVec::Uniform(2), std::log(2.0)).value();
  EXPECT_NEAR(p.kernel()(0, 0), 0.75, 1e-15);
  EXPECT_NEAR(p.kernel()(0, 1), 0.25, 1e-15);
  EXPECT_NEAR(p.kernel()(1, 0), 0.25, 1e-15);
  EXPECT_NEAR(p.kernel()(1, 1), 0.75, 1e-15);
  EXPECT_EQ(p.kind(), PolicyKind::kCrr);
}

TEST(CrrPolicyTest, ZeroBudgetRowsEqualBelief) {
  ProbVec b = ProbVec::Create({0.2, 0.3, 0.5}).value();
  ReleasePolicy p = CrrPolicy(b, 0.0).value();
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 3; ++y) EXPECT_NEAR(p.kernel()(x, y), b[y], 1e-15);
  }
}

TEST(CrrPolicyTest, LargeBudgetIsIdentity) {
  ProbVec b = ProbVec::Create({0.2, 0.3, 0.5}).value();
  for (double eps : {50.0, 80.0}) {
    ReleasePolicy p = CrrPolicy(b, eps).value();
    for (int x = 0; x < 3; ++x) {
      for (int y = 0; y < 3; ++y) {
        EXPECT_NEAR(p.kernel()(x, y), x == y ? 1.0 : 0.0, 1e-12);
      }
    }
  }
  // Just below the cutoff the closed form is already within 1e-12.
  ReleasePolicy near = CrrPolicy(b, 49.0).value();
  EXPECT_NEAR(near.kernel()(0, 0), 1.0, 1e-12);
}

TEST(CrrPolicyTest, RejectsNegativeBudgetAndTinyAlphabet) {
  EXPECT_FALSE(CrrPolicy(ProbVec::Uniform(2), -0.1).ok());
  EXPECT_FALSE(CrrPolicy(ProbVec::Uniform(1), 1.0).ok());
}

// Rows are distributions, the diagonal dominates, and every posterior to
// prior ratio lies in the band, for random beliefs and budgets.
TEST(CrrPolicyTest, RandomizedValidityAndBand) {
  StreamRng rng(42, 0);
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 2 + static_cast<int>(rng.NextBits() % 4);
    ProbVec b = RandomBelief(n, rng, true);
    const double eps = 50.0 * rng.Uniform() * rng.Uniform();
    ReleasePolicy p = CrrPolicy(b, eps).value();
    const Matrix& a = p.kernel();
    for (int x = 0; x < n; ++x) {
      double row = 0.0;
      for (int y = 0; y < n; ++y) {
        EXPECT_GE(a(x, y), 0.0);
        EXPECT_GE(a(y, y) + 1e-15, a(x, y));
        row += a(x, y);
      }
      EXPECT_NEAR(row, 1.0, 1e-9);
    }
    // Brute-force Bayes: Pr(x | y) / Pr(x) = a(x, y) / m(y).
    for (int y = 0; y < n; ++y) {
      double m = 0.0;
      for (int x = 0; x < n; ++x) m += b[x] * a(x, y);
      if (!(m > 0.0)) continue;
      for (int x = 0; x < n; ++x) {
        if (b[x] == 0.0) continue;
        const double ratio = a(x, y) / m;
        EXPECT_LE(ratio, std::exp(eps) * (1 + 1e-9));
        EXPECT_GE(ratio, std::exp(-eps) * (1 - 1e-9));
      }
    }
  }
}

TEST(CrrPolicyTest, ClosedFormMatchesAdaptiveAboveThreshold) {
  const double eps = 1.0;
  ProbVec b = ProbVec::Create({0.36, 0.34, 0.30}).value();
  ASSERT_GE(0.30, CrrValidityThreshold(eps));
  EXPECT_EQ(CrrPolicy(b, eps)->kernel(), CrrClosedFormPolicy(b, eps)->kernel());
  EXPECT_DOUBLE_EQ(CrrScale(b, eps), std::exp(-eps));
}

TEST(CrrPolicyTest, ClosedFormExceedsBandBelowThreshold) {
  const double eps = 1.0;
  ProbVec b = ProbVec::Create({0.1, 0.9}).value();
  ASSERT_LT(0.1, CrrValidityThreshold(eps));
  EXPECT_GT(IilExact(b, CrrClosedFormPolicy(b, eps)->kernel()), eps);
  EXPECT_NEAR(IilExact(b, CrrPolicy(b, eps)->kernel()), eps, 1e-12);
}

TEST(ReleasePolicyTest, Validation) {
  EXPECT_FALSE(ReleasePolicy::Create(PolicyKind::kCustom, 0.1,
                                     Matrix::FromRows({{1.5, 0.0}, {0.0, 1.0}})
                                         .value())
                   .ok());
  EXPECT_FALSE(
      ReleasePolicy::Create(PolicyKind::kCustom, 0.1, Matrix(2, 3, 1.0 / 3)).ok());
  // A crr kernel whose column is dominated off the diagonal.
  EXPECT_FALSE(ReleasePolicy::Create(PolicyKind::kCrr, 0.1,
                                     Matrix::FromRows({{0.3, 0.7}, {0.4, 0.6}})
                                         .value())
                   .ok());
}

TEST(ReleasePolicyTest, JsonRoundTrip) {
  ReleasePolicy p = RrLdpPolicy(3, 0.7).value();
  ReleasePolicy back = PolicyFromJson(PolicyToJson(p)).value();
  EXPECT_EQ(back.kind(), PolicyKind::kRrLdp);
  EXPECT_EQ(back.epsilon(), 0.7);
  EXPECT_EQ(back.kernel(), p.kernel());
  EXPECT_FALSE(PolicyFromJson("{\"kind\": \"crr\"}").ok());
  EXPECT_FALSE(PolicyFromJson(
                   "{\"kind\":\"custom\",\"epsilon\":1,\"kernel\":[[1.5,0],[0,1]]}")
                   .ok());
}

TEST(RrLdpTest, HandEvaluation) {
  ReleasePolicy p = RrLdpPolicy(2, std::log(2.0)).value();
  EXPECT_NEAR(p.kernel()(0, 0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(p.kernel()(0, 1), 1.0 / 3.0, 1e-15);
  ReleasePolicy zero = RrLdpPolicy(4, 0.0).value();
  for (double x : zero.kernel().data()) EXPECT_NEAR(x, 0.25, 1e-15);
  EXPECT_FALSE(RrLdpPolicy(1, 1.0).ok());
}

TEST(RrLdpTest, ColumnRatioAttainsBound) {
  for (double eps : {0.1, 0.5, 2.0}) {
    ReleasePolicy p = RrLdpPolicy(5, eps).value();
    double worst = 0.0;
    for (int y = 0; y < 5; ++y) {
      for (int x = 0; x < 5; ++x) {
        for (int z = 0; z < 5; ++z) {
          worst = std::max(worst, p.kernel()(x, y) / p.kernel()(z, y));
        }
      }
    }
    EXPECT_NEAR(worst, std::exp(eps), 1e-12);
  }
}

TEST(PrivatizeStepTest, IdentityAndDeterminism) {
  ReleasePolicy id =
      ReleasePolicy::Create(PolicyKind::kCustom, 50, Matrix::Identity(3)).value();
  StreamRng rng(1, 0);
  for (int x = 0; x < 3; ++x) EXPECT_EQ(PrivatizeStep(id, x, rng).value(), x);
  EXPECT_FALSE(PrivatizeStep(id, 3, rng).ok());
  ReleasePolicy p = RrLdpPolicy(3, 0.3).value();
  StreamRng a(9, 4);
  StreamRng b(9, 4);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(PrivatizeStep(p, i % 3, a).value(), PrivatizeStep(p, i % 3, b).value());
  }
}

TEST(PrivatizeStepTest, EmpiricalFrequencies) {
  ReleasePolicy p = CrrPolicy(ProbVec::Uniform(2), std::log(2.0)).value();
  StreamRng rng(77, 0);
  int zeros = 0;
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) zeros += PrivatizeStep(p, 0, rng).value() == 0;
  EXPECT_NEAR(static_cast<double>(zeros) / draws, 0.75, 0.002);
}

TEST(ComposeTest, Linear) {
  const std::vector<double> three = {1, 1, 1};
  EXPECT_DOUBLE_EQ(ComposeLinear(three).value(), 3.0);
  EXPECT_DOUBLE_EQ(ComposeLinear({}).value(), 0.0);
  const std::vector<double> ten(10, 0.5);
  EXPECT_DOUBLE_EQ(ComposeLinear(ten).value(), 5.0);
  const std::vector<double> bad = {1, -1};
  EXPECT_FALSE(ComposeLinear(bad).ok());
}

TEST(ComposeTest, Advanced) {
  EXPECT_DOUBLE_EQ(ComposeAdvanced(0.0, 17, 0.01).value(), 0.0);
  const double one = 0.1 * std::expm1(0.1) + 0.1 * std::sqrt(2.0 * std::log(20.0));
  EXPECT_NEAR(ComposeAdvanced(0.1, 1, 0.05).value(), one, 1e-15);
  const double adv = ComposeAdvanced(0.1, 100, 1e-5).value();
  EXPECT_NEAR(adv,
              100 * 0.1 * std::expm1(0.1) +
                  10 * 0.1 * std::sqrt(2.0 * std::log(1e5)),
              1e-12);
  EXPECT_LT(adv, 10.0);
  EXPECT_GT(ComposeAdvancedLinear(0.1, 100, 1e-5).value(), adv);
  EXPECT_FALSE(ComposeAdvanced(0.1, 10, 0.0).ok());
  EXPECT_FALSE(ComposeAdvanced(0.1, 10, 1.0).ok());
  EXPECT_FALSE(ComposeAdvanced(0.1, 0, 0.5).ok());
}

TEST(ComposeTest, NonuniformScheduleUsesLargestStep) {
  const std::vector<double> schedule = {0.1, 0.3, 0.2};
  EXPECT_DOUBLE_EQ(ComposeAdvanced(schedule, 1e-3).value(),
                   ComposeAdvanced(0.3, 3, 1e-3).value());
}

TEST(ComposeTest, MonotoneInSteps) {
  double prev = 0.0;
  for (int t = 1; t <= 50; ++t) {
    const double now = ComposeAdvanced(0.2, t, 1e-4).value();
    EXPECT_GT(now, prev);
    prev = now;
  }
}

TEST(PrivacyBudgetTest, UniformSplit) {
  PrivacyBudget b = PrivacyBudget::Uniform(10.0, 100).value();
  for (double e : b.schedule()) EXPECT_NEAR(e, 0.1, 1e-15);
  EXPECT_NEAR(b.LinearTotal(), 10.0, 1e-12);
  EXPECT_EQ(b.GroupTotals(3).size(), 34u);
  EXPECT_NEAR(b.GroupTotals(3).back(), 0.1, 1e-15);
  EXPECT_FALSE(PrivacyBudget::Uniform(1.0, 0).ok());
  EXPECT_FALSE(PrivacyBudget::FromSchedule({0.1, -0.1}).ok());
}

TEST(StreamTest, PrivatizeStreamIsDeterministicAndChecksInput) {
  MarkovModel m = MarkovModel::BinarySymmetric(0.9, 0.9).value();
  CrrMechanism mech = CrrMechanism::Create(2, std::vector<double>(20, 0.5)).value();
  const std::vector<int> input = {1, 1, 1, 0, 0, 1, 1, 1, 1, 1};
  StreamRng a(3, 0);
  StreamRng b(3, 0);
  EXPECT_EQ(PrivatizeStream(m, mech, input, a).value(),
            PrivatizeStream(m, mech, input, b).value());
  const std::vector<int> bad = {0, 2};
  EXPECT_FALSE(PrivatizeStream(m, mech, bad, a).ok());
  const std::vector<int> long_input(21, 0);
  EXPECT_FALSE(PrivatizeStream(m, mech, long_input, a).ok());
}

// Audited through the exhaustive enumerator: eps-SIP policies satisfy the
// 2 eps likelihood-ratio bound.
TEST(StreamTest, CertifiedPoliciesMeetDoubledLdpBound) {
  StreamRng rng(5, 5);
  for (int trial = 0; trial < 10; ++trial) {
    const double p1 = 0.05 + 0.9 * rng.Uniform();
    const double stay = 0.05 + 0.9 * rng.Uniform();
    MarkovModel m = MarkovModel::BinarySymmetric(p1, stay).value();
    const double eps = 0.1 + rng.Uniform();
    CrrMechanism mech = CrrMechanism::Create(2, std::vector<double>(4, eps)).value();
    LeakageReport r = AuditExact(m, mech, 4).value();
    EXPECT_LE(r.sil, 4 * eps + 1e-9);
    EXPECT_LE(r.ldp_log_ratio, 2 * r.sil + 1e-9);
  }
}

}  // namespace
}  // namespace sip
