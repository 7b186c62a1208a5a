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

#ifndef HASTINGS_MODEL_HPP
#define HASTINGS_MODEL_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hastings/errors.hpp"
#include "hastings/rng.hpp"

namespace hastings {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// Tolerance on proposal row sums for discrete models.
inline constexpr double kRowSumTol = 1e-12;

struct Interval {
  double lo = kNegInf;
  double hi = kPosInf;

  bool contains(double v) const noexcept { return v >= lo && v <= hi; }
  friend bool operator==(const Interval &, const Interval &) = default;
};

class StateSpace {
public:
  struct Discrete {
    std::size_t n;
    friend bool operator==(const Discrete &, const Discrete &) = default;
  };
  struct Continuous1D {
    Interval support;
    friend bool operator==(const Continuous1D &, const Continuous1D &) = default;
  };

  static StateSpace discrete(std::size_t n) {
    if (n < 2) {
      throw ModelError("discrete state space needs at least 2 states, got " + std::to_string(n));
    }
    return StateSpace(Discrete{n});
  }

  static StateSpace continuous(Interval support = {}) {
    if (!(support.lo < support.hi)) {
      throw ModelError("continuous support must be a nonempty interval");
    }
    return StateSpace(Continuous1D{support});
  }

  bool is_discrete() const noexcept { return std::holds_alternative<Discrete>(kind_); }
  /// State count of a discrete space; 0 for continuous spaces.
  std::size_t size() const noexcept {
    return is_discrete() ? std::get<Discrete>(kind_).n : 0;
  }
  Interval support() const {
    if (is_discrete()) {
      return {0.0, static_cast<double>(size() - 1)};
    }
    return std::get<Continuous1D>(kind_).support;
  }

  friend bool operator==(const StateSpace &, const StateSpace &) = default;

private:
  explicit StateSpace(std::variant<Discrete, Continuous1D> kind) : kind_(kind) {}
  std::variant<Discrete, Continuous1D> kind_;
};

/// Un-normalized target; log_p may return -inf for zero mass.
template <class State>
struct Target {
  StateSpace space;
  std::function<double(const State &)> log_p;
};

/// Proposal kernel gamma(y | x). log_gamma takes (y, x) in that order.
template <class State>
struct Proposal {
  StateSpace space;
  std::function<double(const State &y, const State &x)> log_gamma;
  std::function<State(const State &x, RngStream &rng)> sample;
  bool independent = false; ///< gamma(. | x) does not depend on x
};

/// Materialized p and gamma of a discrete model, row-major gamma[x * n + y] = gamma(y|x).
struct DiscreteTables {
  std::size_t n = 0;
  std::vector<double> p;
  std::vector<double> gamma;
  std::vector<double> log_p;
  std::vector<double> log_gamma;
  std::vector<double> cdf;

  double gamma_at(std::size_t y, std::size_t x) const { return gamma[x * n + y]; }
};

/**
 * A target paired with a proposal on the same space. Immutable after
 * construction; copies share the discrete tables.
 */
template <class State>
class Model {
public:
  using state_type = State;

  Model(Target<State> target, Proposal<State> proposal,
        std::shared_ptr<const DiscreteTables> tables = nullptr)
      : target_(std::move(target)), proposal_(std::move(proposal)), tables_(std::move(tables)) {
    if (!(target_.space == proposal_.space)) {
      throw ModelError("target and proposal are defined on different state spaces");
    }
    if (!target_.log_p || !proposal_.log_gamma || !proposal_.sample) {
      throw ModelError("model requires log_p, log_gamma and sample functions");
    }
  }

  double log_p(const State &x) const { return target_.log_p(x); }
  /// log gamma(y | x)
  double log_gamma(const State &y, const State &x) const { return proposal_.log_gamma(y, x); }
  State sample(const State &x, RngStream &rng) const { return proposal_.sample(x, rng); }

  const StateSpace &space() const noexcept { return target_.space; }
  bool independent_proposal() const noexcept { return proposal_.independent; }
  const Target<State> &target() const noexcept { return target_; }
  const Proposal<State> &proposal() const noexcept { return proposal_; }
  /// Non-null for models built by make_discrete_model.
  const DiscreteTables *tables() const noexcept { return tables_.get(); }

private:
  Target<State> target_;
  Proposal<State> proposal_;
  std::shared_ptr<const DiscreteTables> tables_;
};

using DiscreteState = std::size_t;
using DiscreteModel = Model<DiscreteState>;
using ContinuousModel = Model<double>;

/**
 * Builds a model on {0, ..., n-1} from a mass vector and a row-stochastic
 * proposal matrix (gamma[x][y] = gamma(y | x)). Throws ModelError naming the
 * offending index on dimension mismatch, negative entries, all-zero p, or a row
 * whose sum is off by more than 1e-12.
 */
inline DiscreteModel make_discrete_model(const std::vector<double> &p,
                                         const std::vector<std::vector<double>> &gamma) {
  const std::size_t n = p.size();
  const StateSpace space = StateSpace::discrete(n);
  if (gamma.size() != n) {
    throw ModelError("proposal has " + std::to_string(gamma.size()) + " rows, expected " +
                     std::to_string(n));
  }
  bool any_mass = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(p[i] >= 0.0) || !std::isfinite(p[i])) {
      throw ModelError("target mass p[" + std::to_string(i) + "] must be finite and nonnegative");
    }
    any_mass = any_mass || p[i] > 0.0;
  }
  if (!any_mass) {
    throw ModelError("target has no positive mass");
  }

  auto tables = std::make_shared<DiscreteTables>();
  tables->n = n;
  tables->p = p;
  tables->gamma.reserve(n * n);
  tables->cdf.reserve(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    if (gamma[x].size() != n) {
      throw ModelError("proposal row " + std::to_string(x) + " has " +
                       std::to_string(gamma[x].size()) + " entries, expected " + std::to_string(n));
    }
    double sum = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      const double g = gamma[x][y];
      if (!(g >= 0.0) || !std::isfinite(g)) {
        throw ModelError("proposal entry [" + std::to_string(x) + "][" + std::to_string(y) +
                         "] must be finite and nonnegative");
      }
      sum += g;
      tables->gamma.push_back(g);
      tables->cdf.push_back(sum);
    }
    if (std::abs(sum - 1.0) > kRowSumTol) {
      throw ModelError("proposal row " + std::to_string(x) + " sums to " + detail::to_text(sum) +
                       ", expected 1");
    }
  }
  for (double v : tables->p) {
    tables->log_p.push_back(std::log(v));
  }
  for (double v : tables->gamma) {
    tables->log_gamma.push_back(std::log(v));
  }

  bool independent = true;
  for (std::size_t x = 1; x < n && independent; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (tables->gamma[x * n + y] != tables->gamma[y]) {
        independent = false;
        break;
      }
    }
  }

  std::shared_ptr<const DiscreteTables> shared = tables;
  auto check = [n](DiscreteState s) {
    if (s >= n) {
      throw ModelError("state " + std::to_string(s) + " outside {0, ..., " + std::to_string(n - 1) +
                       "}");
    }
  };
  Target<DiscreteState> target{space, [shared, check](const DiscreteState &x) {
                                 check(x);
                                 return shared->log_p[x];
                               }};
  Proposal<DiscreteState> proposal{
      space,
      [shared, check](const DiscreteState &y, const DiscreteState &x) {
        check(x);
        check(y);
        return shared->log_gamma[x * shared->n + y];
      },
      [shared, check](const DiscreteState &x, RngStream &rng) {
        check(x);
        // Inverse CDF with one uniform, scaled by the row total so rows that sum
        // to 1 - 1e-13 still always land on a state with positive mass.
        const std::size_t n = shared->n;
        const double *row = shared->cdf.data() + x * n;
        const double u = rng.uniform() * row[n - 1];
        std::size_t y = 0;
        while (y + 1 < n && (row[y] <= u || shared->gamma[x * n + y] == 0.0)) {
          ++y;
        }
        return y;
      },
      independent};
  return DiscreteModel(std::move(target), std::move(proposal), std::move(shared));
}

enum class ProposalKind { random_walk, autoregressive };

/**
 * Standard normal target p(x) = exp(-x^2/2) on the real line with a Gaussian
 * proposal: y ~ N(x, sigma^2) (random_walk) or y ~ N(a x, sigma^2) with
 * a in (0, 1) (autoregressive, asymmetric).
 */
inline ContinuousModel make_normal_model(double sigma, ProposalKind kind = ProposalKind::random_walk,
                                         double a = 0.5) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ModelError("proposal sigma must be positive, got " + detail::to_text(sigma));
  }
  if (kind == ProposalKind::autoregressive && !(a > 0.0 && a < 1.0)) {
    throw ModelError("autoregressive coefficient must lie in (0, 1), got " + detail::to_text(a));
  }
  const double shift = kind == ProposalKind::autoregressive ? a : 1.0;
  const double log_norm = -std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
  const StateSpace space = StateSpace::continuous();

  Target<double> target{space, [](const double &x) { return -0.5 * x * x; }};
  Proposal<double> proposal{space,
                            [shift, sigma, log_norm](const double &y, const double &x) {
                              const double z = (y - shift * x) / sigma;
                              return log_norm - 0.5 * z * z;
                            },
                            [shift, sigma](const double &x, RngStream &rng) {
                              return shift * x + sigma * rng.normal();
                            },
                            false};
  return ContinuousModel(std::move(target), std::move(proposal));
}

} // namespace hastings

#endif // HASTINGS_MODEL_HPP
