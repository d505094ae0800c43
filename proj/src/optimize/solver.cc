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

#include "sip/optimize/solver.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace sip {
namespace {

constexpr int kPowerIterations = 50;

// The privacy constraints of the linear program, each row scaled to unit
// Euclidean norm:
//   U(o,r) = du[o] (lambda a(o,r) - m(r)) <= 0
//   L(o,r) = dl[o] (lambda m(r) - a(o,r)) <= 0
// with m(r) = sum_p beta[p] a(p,r) and lambda = e^-eps.
class ConstraintOperator {
 public:
  ConstraintOperator(const ProbVec& beta, double lambda)
      : n_(beta.size()), beta_(beta.weights()), lambda_(lambda),
        du_(n_), dl_(n_), m_(n_), su_(n_), sl_(n_) {
    double sum_sq = 0.0;
    for (double b : beta_) sum_sq += b * b;
    for (int o = 0; o < n_; ++o) {
      const double b = beta_[o];
      const double rest = sum_sq - b * b;
      const double nu = std::sqrt(rest + (lambda - b) * (lambda - b));
      const double nl = std::sqrt(lambda * lambda * rest +
                                  (lambda * b - 1.0) * (lambda * b - 1.0));
      du_[o] = nu > 1e-12 ? 1.0 / nu : 0.0;
      dl_[o] = nl > 1e-12 ? 1.0 / nl : 0.0;
    }
  }

  // out_u, out_l = K a.
  void Apply(const std::vector<double>& a, std::vector<double>& out_u,
             std::vector<double>& out_l) {
    std::fill(m_.begin(), m_.end(), 0.0);
    for (int p = 0; p < n_; ++p) {
      if (beta_[p] == 0.0) continue;
      for (int r = 0; r < n_; ++r) m_[r] += beta_[p] * a[p * n_ + r];
    }
    for (int o = 0; o < n_; ++o) {
      for (int r = 0; r < n_; ++r) {
        const double x = a[o * n_ + r];
        out_u[o * n_ + r] = du_[o] * (lambda_ * x - m_[r]);
        out_l[o * n_ + r] = dl_[o] * (lambda_ * m_[r] - x);
      }
    }
  }

  // out = K^T (yu, yl).
  void ApplyTranspose(const std::vector<double>& yu,
                      const std::vector<double>& yl, std::vector<double>& out) {
    std::fill(su_.begin(), su_.end(), 0.0);
    std::fill(sl_.begin(), sl_.end(), 0.0);
    for (int p = 0; p < n_; ++p) {
      for (int r = 0; r < n_; ++r) {
        su_[r] += du_[p] * yu[p * n_ + r];
        sl_[r] += dl_[p] * yl[p * n_ + r];
      }
    }
    for (int o = 0; o < n_; ++o) {
      const double b = beta_[o];
      for (int r = 0; r < n_; ++r) {
        const int i = o * n_ + r;
        out[i] = du_[o] * lambda_ * yu[i] - b * su_[r] +
                 lambda_ * b * sl_[r] - dl_[o] * yl[i];
      }
    }
  }

  // Power iteration on K^T K.
  double EstimateNorm() {
    const int size = n_ * n_;
    std::vector<double> v(size), u(size), l(size);
    for (int i = 0; i < size; ++i) v[i] = 1.0 + 0.1 * std::sin(1.0 + i);
    double norm = 0.0;
    for (int it = 0; it < kPowerIterations; ++it) {
      double len = 0.0;
      for (double x : v) len += x * x;
      len = std::sqrt(len);
      if (len == 0.0) return 1.0;
      for (double& x : v) x /= len;
      Apply(v, u, l);
      ApplyTranspose(u, l, v);
      double next = 0.0;
      for (double x : v) next += x * x;
      norm = std::sqrt(std::sqrt(next));
    }
    return std::max(norm, 1e-6);
  }

 private:
  int n_;
  const std::vector<double>& beta_;
  double lambda_;
  std::vector<double> du_, dl_, m_, su_, sl_;
};

struct Repaired {
  double objective;
  double max_ratio;
  double min_ratio;
};

// Mixes `a` with the constant kernel of its output marginal just enough to
// put every ratio inside [lo, hi]; writes the result to `out`.
Repaired RepairInto(const std::vector<double>& a, const ProbVec& beta,
                    const std::vector<double>& cost, double lo, double hi,
                    std::vector<double>& out) {
  const int n = beta.size();
  std::vector<double> m(n, 0.0);
  for (int p = 0; p < n; ++p) {
    if (beta[p] == 0.0) continue;
    for (int r = 0; r < n; ++r) m[r] += beta[p] * a[p * n + r];
  }
  double t = 0.0;
  double max_ratio = 1.0;
  double min_ratio = 1.0;
  for (int o = 0; o < n; ++o) {
    for (int r = 0; r < n; ++r) {
      if (!(m[r] > 0.0)) continue;
      const double x = beta[o] == 0.0 ? m[r] : a[o * n + r];
      const double rho = x / m[r];
      max_ratio = std::max(max_ratio, rho);
      min_ratio = std::min(min_ratio, rho);
      if (rho > hi) t = std::max(t, (rho - hi) / (rho - 1.0));
      if (rho < lo) t = std::max(t, (lo - rho) / (1.0 - rho));
    }
  }
  double objective = 0.0;
  for (int o = 0; o < n; ++o) {
    for (int r = 0; r < n; ++r) {
      const int i = o * n + r;
      const double x = beta[o] == 0.0 ? m[r] : a[i];
      out[i] = (1.0 - t) * x + t * m[r];
      objective += cost[i] * out[i];
    }
  }
  return {objective, max_ratio, min_ratio};
}

}  // namespace

void ProjectOntoSimplex(std::span<double> v) {
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (size_t j = 0; j < sorted.size(); ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) theta = candidate;
  }
  for (double& x : v) x = std::max(0.0, x - theta);
}

absl::StatusOr<SolveResult> SolveBatchPolicy(const BatchObjective& objective,
                                             const SolverOptions& options) {
  if (!(options.step_length > 0.0)) {
    return absl::InvalidArgumentError("step_length must be > 0");
  }
  if (options.max_iters < 1) {
    return absl::InvalidArgumentError("max_iters must be >= 1");
  }
  const int n = objective.size();
  const int size = n * n;
  const ProbVec& beta = objective.belief();
  const double eps = objective.epsilon();
  const bool unbounded = eps >= kEpsilonInfinity;
  const double lambda = unbounded ? 0.0 : std::exp(-eps);
  const double hi = unbounded ? std::numeric_limits<double>::infinity()
                              : std::exp(eps);
  const double lo = lambda;

  std::vector<double> cost(size);
  const Matrix grad = objective.Gradient();
  for (int i = 0; i < size; ++i) cost[i] = grad.data()[i];

  ConstraintOperator op(beta, lambda);
  const double norm = op.EstimateNorm() * 1.01;
  const double tau = options.step_length / norm;
  const double sigma = 0.9 / (options.step_length * norm);

  std::vector<double> x(size, 1.0 / n), x_new(size), x_bar(size), g(size);
  std::vector<double> yu(size, 0.0), yl(size, 0.0), ku(size), kl(size);
  std::vector<double> repaired(size), best(size);

  // The uniform kernel has every ratio equal to 1, so it is feasible.
  Repaired start = RepairInto(x, beta, cost, lo, hi, best);
  if (start.max_ratio > hi + 1e-12 ||
      start.min_ratio < lo - 1e-12) {
    return absl::InternalError("uniform start kernel is infeasible");
  }
  double best_objective = start.objective;
  double lower_bound = -std::numeric_limits<double>::infinity();

  std::vector<SolverTraceRow> trace;
  bool converged = false;
  int iter = 0;
  for (iter = 1; iter <= options.max_iters; ++iter) {
    op.ApplyTranspose(yu, yl, g);
    // Any nonnegative multipliers give a lower bound: minimize the
    // Lagrangian row by row over the simplex.
    double bound = 0.0;
    for (int o = 0; o < n; ++o) {
      double row_min = std::numeric_limits<double>::infinity();
      for (int r = 0; r < n; ++r) {
        row_min = std::min(row_min, cost[o * n + r] + g[o * n + r]);
      }
      bound += row_min;
    }
    lower_bound = std::max(lower_bound, bound);

    for (int o = 0; o < n; ++o) {
      for (int r = 0; r < n; ++r) {
        const int i = o * n + r;
        x_new[i] = x[i] - tau * (cost[i] + g[i]);
      }
      ProjectOntoSimplex(std::span<double>(x_new.data() + o * n, n));
    }
    for (int i = 0; i < size; ++i) x_bar[i] = 2.0 * x_new[i] - x[i];
    op.Apply(x_bar, ku, kl);
    int active = 0;
    for (int i = 0; i < size; ++i) {
      yu[i] = std::max(0.0, yu[i] + sigma * ku[i]);
      yl[i] = std::max(0.0, yl[i] + sigma * kl[i]);
      active += (yu[i] > 0.0) + (yl[i] > 0.0);
    }
    x.swap(x_new);

    Repaired r = RepairInto(x, beta, cost, lo, hi, repaired);
    if (r.objective < best_objective) {
      best_objective = r.objective;
      best.swap(repaired);
    }
    if (options.record_trace) {
      trace.push_back(SolverTraceRow{iter, best_objective, r.max_ratio,
                                     r.min_ratio, lower_bound, active});
    }
    if (best_objective - lower_bound <=
        options.gap_tolerance * (1.0 + std::abs(best_objective))) {
      converged = true;
      break;
    }
  }

  Matrix kernel(n, n);
  kernel.data() = best;
  absl::StatusOr<ReleasePolicy> policy =
      ReleasePolicy::Create(PolicyKind::kBatched, eps, std::move(kernel));
  if (!policy.ok()) return policy.status();
  const double value = objective.Value(policy->kernel());
  return SolveResult{*std::move(policy), value,
                     std::min(lower_bound, value), converged,
                     std::min(iter, options.max_iters), std::move(trace)};
}

absl::StatusOr<SolveResult> SolveBatchPolicy(const BatchObjective& objective,
                                             double step_length,
                                             int max_iters) {
  SolverOptions options;
  options.step_length = step_length;
  options.max_iters = max_iters;
  return SolveBatchPolicy(objective, options);
}

std::string TraceToCsv(const std::vector<SolverTraceRow>& trace) {
  std::string out =
      "iteration,objective,max_ratio,min_ratio,lower_bound,active\n";
  for (const SolverTraceRow& row : trace) {
    absl::StrAppendFormat(&out, "%d,%.17g,%.17g,%.17g,%.17g,%d\n",
                          row.iteration, row.objective, row.max_ratio,
                          row.min_ratio, row.lower_bound, row.active);
  }
  return out;
}

}  // namespace sip
