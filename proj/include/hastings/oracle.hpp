/*
 * Copyright (C) 2026 The hastings-lab authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HASTINGS_ORACLE_HPP
#define HASTINGS_ORACLE_HPP

// Exact verification on discrete models: full transition kernels, detailed
// balance, stationary laws, and pointwise rule comparison.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <concepts>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hastings/acceptance.hpp"
#include "hastings/diagnostics.hpp"
#include "hastings/errors.hpp"
#include "hastings/model.hpp"
#include "hastings/rng.hpp"
#include "hastings/samplers.hpp"

namespace hastings {

inline constexpr std::size_t kMaxKernelStates = 4096;

/// Row-major n x n kernel, entry (x, y) = P(y | x).
class TransitionMatrix {
public:
  TransitionMatrix(std::size_t n, std::vector<double> entries) : n_(n), entries_(std::move(entries)) {
    if (entries_.size() != n_ * n_) {
      throw Error("transition matrix needs n*n entries");
    }
  }

  static TransitionMatrix identity(std::size_t n) {
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      e[i * n + i] = 1.0;
    }
    return {n, std::move(e)};
  }

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t x, std::size_t y) const { return entries_[x * n_ + y]; }
  std::span<const double> row(std::size_t x) const { return {entries_.data() + x * n_, n_}; }
  const std::vector<double> &entries() const noexcept { return entries_; }

private:
  std::size_t n_;
  std::vector<double> entries_;
};

/**
 * Kernel of a single-stage algorithm from its acceptance function:
 *   P(y|x) = alpha(x,y) gamma(y|x) for y != x,
 *   P(x|x) = gamma(x|x) alpha(x,x) + sum_z (1 - alpha(x,z)) gamma(z|x).
 * Pairs with gamma(y|x) = 0 contribute nothing and alpha is not evaluated there.
 */
template <class AlphaFn>
  requires std::invocable<AlphaFn &, std::size_t, std::size_t>
TransitionMatrix build_kernel(const DiscreteModel &model, AlphaFn &&alpha) {
  const DiscreteTables *tables = model.tables();
  if (tables == nullptr) {
    throw Error("build_kernel needs a model made by make_discrete_model");
  }
  const std::size_t n = tables->n;
  if (n > kMaxKernelStates) {
    throw Error("build_kernel is limited to " + std::to_string(kMaxKernelStates) + " states");
  }
  std::vector<double> e(n * n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    double stay = 0.0;
    for (std::size_t z = 0; z < n; ++z) {
      const double g = tables->gamma_at(z, x);
      if (g == 0.0) {
        continue;
      }
      const double a = alpha(x, z);
      if (z == x) {
        stay += g * a;
      } else {
        e[x * n + z] = a * g;
      }
      stay += (1.0 - a) * g;
    }
    e[x * n + x] = stay;
  }
  return {n, std::move(e)};
}

inline TransitionMatrix build_kernel(const DiscreteModel &model,
                                     const AcceptanceRule<DiscreteState> &rule) {
  return build_kernel(model, [&](std::size_t x, std::size_t y) { return rule.alpha(model, x, y); });
}

/// Kernel of the two-stage algorithm; its acceptance is alpha_m(k) pair by pair.
inline TransitionMatrix build_kernel_L(const DiscreteModel &model, const SymmetricFn<DiscreteState> &k) {
  return build_kernel(model, [&](std::size_t x, std::size_t y) { return alpha_m(model, k, x, y); });
}

inline double max_row_sum_error(const TransitionMatrix &P) {
  double worst = 0.0;
  for (std::size_t x = 0; x < P.size(); ++x) {
    const auto r = P.row(x);
    worst = std::max(worst, std::abs(std::accumulate(r.begin(), r.end(), 0.0) - 1.0));
  }
  return worst;
}

inline std::vector<double> normalized_target(const DiscreteModel &model) {
  const DiscreteTables *tables = model.tables();
  if (tables == nullptr) {
    throw Error("normalized_target needs a model made by make_discrete_model");
  }
  const double total = std::accumulate(tables->p.begin(), tables->p.end(), 0.0);
  std::vector<double> pi(tables->p);
  for (double &v : pi) {
    v /= total;
  }
  return pi;
}

struct BalanceReport {
  double max_violation = 0.0;
  std::pair<std::size_t, std::size_t> worst_pair{0, 0};
  double tolerance = 0.0;
  bool passed = true;
};

/// max over x != y of |p(x)P(y|x) - p(y)P(x|y)|, on the un-normalized scale.
/// Passes when it is at most 1e-12 max(p).
inline BalanceReport check_detailed_balance(const DiscreteModel &model, const TransitionMatrix &P) {
  const DiscreteTables *tables = model.tables();
  if (tables == nullptr || tables->n != P.size()) {
    throw Error("check_detailed_balance: kernel and model disagree on the state count");
  }
  BalanceReport report;
  report.tolerance = kIdentityTol * *std::max_element(tables->p.begin(), tables->p.end());
  for (std::size_t x = 0; x < P.size(); ++x) {
    for (std::size_t y = x + 1; y < P.size(); ++y) {
      const double v = std::abs(tables->p[x] * P(x, y) - tables->p[y] * P(y, x));
      if (v > report.max_violation) {
        report.max_violation = v;
        report.worst_pair = {x, y};
      }
    }
  }
  report.passed = report.max_violation <= report.tolerance;
  return report;
}

/// Strong connectivity of the off-diagonal support graph.
inline bool is_irreducible(const TransitionMatrix &P) {
  const std::size_t n = P.size();
  auto reach_all = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        const double w = forward ? P(u, v) : P(v, u);
        if (v != u && w > 0.0 && !seen[v]) {
          seen[v] = 1;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == n;
  };
  return n == 1 || (reach_all(true) && reach_all(false));
}

/**
 * Left fixed point of P by power iteration from the uniform vector, stopping
 * when ||v P - v||_inf <= residual. Throws ConvergenceError for reducible
 * kernels and when the iteration cap is hit (periodic kernels).
 */
inline std::vector<double> stationary_distribution(const TransitionMatrix &P, double residual = 1e-13,
                                                   std::size_t max_iterations = 1'000'000) {
  const std::size_t n = P.size();
  if (!is_irreducible(P)) {
    throw ConvergenceError("kernel is reducible; the fixed point is not unique");
  }
  std::vector<double> v(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t x = 0; x < n; ++x) {
      const double vx = v[x];
      const auto r = P.row(x);
      for (std::size_t y = 0; y < n; ++y) {
        next[y] += vx * r[y];
      }
    }
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    double change = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      next[y] /= total;
      change = std::max(change, std::abs(next[y] - v[y]));
    }
    v.swap(next);
    if (change <= residual) {
      return v;
    }
  }
  throw ConvergenceError("power iteration did not reach residual " + detail::to_text(residual));
}

/// sum_x pi(x) sum_y gamma(y|x) alpha(x,y): the long-run rate of accepted proposals.
template <class AlphaFn>
  requires std::invocable<AlphaFn &, std::size_t, std::size_t>
double expected_acceptance(const DiscreteModel &model, AlphaFn &&alpha) {
  const std::vector<double> pi = normalized_target(model);
  const DiscreteTables &t = *model.tables();
  double rate = 0.0;
  for (std::size_t x = 0; x < t.n; ++x) {
    for (std::size_t y = 0; y < t.n; ++y) {
      const double g = t.gamma_at(y, x);
      if (g > 0.0 && pi[x] > 0.0) {
        rate += pi[x] * g * alpha(x, y);
      }
    }
  }
  return rate;
}

inline double expected_acceptance(const DiscreteModel &model, const AcceptanceRule<DiscreteState> &rule) {
  return expected_acceptance(model, [&](std::size_t x, std::size_t y) { return rule.alpha(model, x, y); });
}

/**
 * Asymptotic covariance of the state-indicator vector along a stationary chain,
 *   Sigma_ij = pi_i Z_ij + pi_j Z_ji - pi_i delta_ij - pi_i pi_j,
 * with fundamental matrix Z = (I - P + 1 pi^T)^{-1}.
 */
inline Eigen::MatrixXd asymptotic_covariance(const TransitionMatrix &P, std::span<const double> pi) {
  const auto n = static_cast<Eigen::Index>(P.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd p(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    p(i) = pi[static_cast<std::size_t>(i)];
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      A(i, j) -= P(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      A(i, j) += p(j);
    }
  }
  const Eigen::MatrixXd Z = A.partialPivLu().inverse();
  const Eigen::MatrixXd D = p.asDiagonal();
  return D * Z + Z.transpose() * D - Eigen::MatrixXd(D) - p * p.transpose();
}

/**
 * Goodness of fit of chain state counts to pi that accounts for autocorrelation:
 * T = N (f - pi)' Sigma^{-1} (f - pi) over the first n-1 states, with Sigma the
 * chain's asymptotic covariance, compared against chi-square with n-1 degrees
 * of freedom.
 */
inline ChiSquareResult chi_square_stationarity(std::span<const std::size_t> counts,
                                               std::span<const double> pi, const Eigen::MatrixXd &sigma,
                                               double significance) {
  const std::size_t n = counts.size();
  if (n < 2 || pi.size() != n || static_cast<std::size_t>(sigma.rows()) != n) {
    throw Error("chi_square_stationarity: dimension mismatch");
  }
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  const auto d = static_cast<Eigen::Index>(n - 1);
  Eigen::VectorXd diff(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    diff(i) = static_cast<double>(counts[static_cast<std::size_t>(i)]) / total - pi[static_cast<std::size_t>(i)];
  }
  const Eigen::MatrixXd reduced = sigma.topLeftCorner(d, d);
  const Eigen::VectorXd solved = reduced.ldlt().solve(diff);
  return chi_square_decision(total * diff.dot(solved), n - 1, significance);
}

/// Visit counts of each state over states[1..N] of a run.
inline std::vector<std::size_t> state_counts(const ChainRun<DiscreteState> &run, std::size_t n,
                                             std::size_t discard = 0) {
  std::vector<std::size_t> counts(n, 0);
  for (std::size_t i = 1 + discard; i < run.states.size(); ++i) {
    ++counts[run.states[i]];
  }
  return counts;
}

// ---------------------------------------------------------------------------
// Rule comparison
// ---------------------------------------------------------------------------

struct PairComparison {
  std::size_t x;
  std::size_t y;
  double alpha_a;
  double alpha_b;
  double kernel_a; ///< off-diagonal P_A(y|x)
  double kernel_b;
};

struct ComparisonOptions {
  std::size_t steps = 1'000'000;
  std::uint64_t seed = 0;
  std::size_t indicator_state = 0;
  bool estimate_variance = true;
};

struct RuleComparison {
  std::string label_a;
  std::string label_b;
  std::vector<PairComparison> pairs; ///< every ordered pair x != y
  bool alpha_a_dominates = true;     ///< alpha_A >= alpha_B - 1e-12 everywhere
  bool kernel_a_dominates = true;    ///< P_A >= P_B - 1e-12 off the diagonal
  double exact_variance_a = 0.0;     ///< asymptotic variance of the indicator statistic
  double exact_variance_b = 0.0;
  std::optional<BatchMeans> estimate_a;
  std::optional<BatchMeans> estimate_b;
};

/// Off-diagonal dominance of one kernel over another, within 1e-12.
inline bool kernel_dominates(const TransitionMatrix &A, const TransitionMatrix &B) {
  if (A.size() != B.size()) {
    throw Error("cannot compare kernels on different state spaces");
  }
  for (std::size_t x = 0; x < A.size(); ++x) {
    for (std::size_t y = 0; y < A.size(); ++y) {
      if (x != y && A(x, y) < B(x, y) - kIdentityTol) {
        return false;
      }
    }
  }
  return true;
}

/**
 * Pointwise acceptance and kernel ordering of rule A against rule B, plus the
 * asymptotic variance of the indicator of `indicator_state` under each kernel
 * (exact, and estimated by batch means from a chain when requested). The
 * variances are reported, not ordered.
 */
inline RuleComparison compare_rules(const DiscreteModel &model, const AcceptanceRule<DiscreteState> &a,
                                    const AcceptanceRule<DiscreteState> &b,
                                    const ComparisonOptions &options = {}) {
  const TransitionMatrix Pa = build_kernel(model, a);
  const TransitionMatrix Pb = build_kernel(model, b);
  const std::size_t n = Pa.size();
  RuleComparison out;
  out.label_a = a.label();
  out.label_b = b.label();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) {
        continue;
      }
      PairComparison pc{x, y, a.alpha(model, x, y), b.alpha(model, x, y), Pa(x, y), Pb(x, y)};
      out.alpha_a_dominates = out.alpha_a_dominates && pc.alpha_a >= pc.alpha_b - kIdentityTol;
      out.pairs.push_back(pc);
    }
  }
  out.kernel_a_dominates = kernel_dominates(Pa, Pb);

  const std::vector<double> pi = normalized_target(model);
  const auto i = static_cast<Eigen::Index>(options.indicator_state);
  out.exact_variance_a = asymptotic_covariance(Pa, pi)(i, i);
  out.exact_variance_b = asymptotic_covariance(Pb, pi)(i, i);

  if (options.estimate_variance) {
    auto estimate = [&](const AcceptanceRule<DiscreteState> &rule, std::uint64_t stream) {
      RngStream rng(options.seed, stream);
      const auto run = run_chain(model, rule, options.indicator_state, options.steps, rng);
      std::vector<double> series;
      series.reserve(run.states.size() - 1);
      for (std::size_t t = 1; t < run.states.size(); ++t) {
        series.push_back(run.states[t] == options.indicator_state ? 1.0 : 0.0);
      }
      return batch_means(series);
    };
    out.estimate_a = estimate(a, 0);
    out.estimate_b = estimate(b, 1);
  }
  return out;
}

} // namespace hastings

#endif // HASTINGS_ORACLE_HPP
