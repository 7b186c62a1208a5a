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

#ifndef HASTINGS_SAMPLERS_HPP
#define HASTINGS_SAMPLERS_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hastings/acceptance.hpp"
#include "hastings/errors.hpp"
#include "hastings/model.hpp"
#include "hastings/rng.hpp"
#include "hastings/symmetric_fn.hpp"

namespace hastings {

/**
 * Why a step stayed put. Two-stage steps split rejections into type_x (the
 * minorizing test on x failed) and type_y (the majorizing test on y failed);
 * single-stage rule steps report `unclassified`.
 */
enum class Duplication : std::uint8_t { none, type_x, type_y, unclassified };

constexpr std::string_view to_string(Duplication d) noexcept {
  switch (d) {
  case Duplication::none: return "none";
  case Duplication::type_x: return "type_x";
  case Duplication::type_y: return "type_y";
  case Duplication::unclassified: return "n/a";
  }
  return "?";
}

template <class State>
struct StepOutcome {
  State next;
  bool accepted;
  Duplication duplication;
};

template <class State>
struct ChainRun {
  std::vector<State> states; ///< N + 1 entries, start state first
  std::vector<Duplication> outcomes;
  std::size_t proposals_made = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::optional<std::size_t> typex_dup; ///< set for two-stage runs only
  std::optional<std::size_t> typey_dup;
  std::string rule;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  double acceptance_rate() const noexcept {
    return proposals_made == 0 ? 0.0
                               : static_cast<double>(accepted) / static_cast<double>(proposals_made);
  }

  friend bool operator==(const ChainRun &, const ChainRun &) = default;
};

namespace detail {

template <class State>
void require_positive_mass(const Model<State> &model, const State &x) {
  if (!(model.log_p(x) > kNegInf)) {
    throw DegeneratePairError("chain cannot stand at zero-mass state " + to_text(x));
  }
}

template <class State>
StepOutcome<State> threshold(const State &x, const State &y, double r, double alpha,
                             Duplication on_reject) {
  if (r <= alpha) {
    return {y, true, Duplication::none};
  }
  return {x, false, on_reject};
}

} // namespace detail

/// Acceptance test for a given proposal: draws one uniform r and moves iff r <= alpha.
template <class State>
StepOutcome<State> accept_test(const Model<State> &model, const AcceptanceRule<State> &rule,
                               const State &x, const State &y, RngStream &rng) {
  const double r = rng.uniform();
  return detail::threshold(x, y, r, rule.alpha(model, x, y), Duplication::unclassified);
}

/// One step of the single-stage algorithm: y ~ gamma(.|x), then one uniform.
template <class State>
StepOutcome<State> step_generic(const Model<State> &model, const AcceptanceRule<State> &rule,
                                const State &x, RngStream &rng) {
  detail::require_positive_mass(model, x);
  const State y = model.sample(x, rng);
  return accept_test(model, rule, x, y, rng);
}

/**
 * Two-stage test for a given proposal. Stage one keeps x (type_x) when
 * r1 > min{k gamma(x|y)/p(x), 1}; stage two draws r2 only if stage one passed
 * and keeps x (type_y) when r2 > min{p(y)/(k gamma(y|x)), 1}.
 */
template <class State>
StepOutcome<State> two_stage_test(const Model<State> &model, const SymmetricFn<State> &k,
                                  const State &x, const State &y, RngStream &rng) {
  detail::require_role(k, Role::k, "L");
  const PairLogs t = pair_logs(model, x, y);
  detail::require_current_mass(t, x, y);
  const double log_k = detail::log_k_checked(k, x, y);
  const double stage_x = std::exp(std::min(detail::log_x_factor(t, log_k), 0.0));
  const double r1 = rng.uniform();
  if (r1 > stage_x) {
    return {x, false, Duplication::type_x};
  }
  const double stage_y = std::exp(std::min(detail::log_y_factor(t, log_k), 0.0));
  const double r2 = rng.uniform();
  return detail::threshold(x, y, r2, stage_y, Duplication::type_y);
}

template <class State>
StepOutcome<State> step_L(const Model<State> &model, const SymmetricFn<State> &k, const State &x,
                          RngStream &rng) {
  detail::require_positive_mass(model, x);
  const State y = model.sample(x, rng);
  return two_stage_test(model, k, x, y, rng);
}

/**
 * Iterates `step(x, rng) -> StepOutcome` N times from x0 and collects the
 * trajectory. Duplication counts are split only when `two_stage` is set.
 */
template <class State, class StepFn>
ChainRun<State> run_chain_with(const State &x0, std::size_t steps, RngStream &rng, StepFn &&step,
                               std::string label, bool two_stage) {
  if (steps < 1) {
    throw Error("run_chain needs at least one step");
  }
  ChainRun<State> run;
  run.rule = std::move(label);
  run.seed = rng.seed();
  run.stream_id = rng.stream_id();
  run.states.reserve(steps + 1);
  run.outcomes.reserve(steps);
  run.states.push_back(x0);
  std::size_t type_x = 0;
  std::size_t type_y = 0;
  State x = x0;
  for (std::size_t i = 0; i < steps; ++i) {
    const StepOutcome<State> out = step(x, rng);
    x = out.next;
    run.states.push_back(x);
    run.outcomes.push_back(out.duplication);
    if (out.accepted) {
      ++run.accepted;
    } else {
      ++run.rejected;
      type_x += out.duplication == Duplication::type_x ? 1 : 0;
      type_y += out.duplication == Duplication::type_y ? 1 : 0;
    }
  }
  run.proposals_made = steps;
  if (two_stage) {
    run.typex_dup = type_x;
    run.typey_dup = type_y;
  }
  return run;
}

template <class State>
ChainRun<State> run_chain(const Model<State> &model, const AcceptanceRule<State> &rule,
                          const State &x0, std::size_t steps, RngStream &rng) {
  detail::require_positive_mass(model, x0);
  return run_chain_with(
      x0, steps, rng, [&](const State &x, RngStream &r) { return step_generic(model, rule, x, r); },
      rule.label(), false);
}

/// Chain of the two-stage algorithm with coefficient k.
template <class State>
ChainRun<State> run_chain_L(const Model<State> &model, const SymmetricFn<State> &k, const State &x0,
                            std::size_t steps, RngStream &rng) {
  detail::require_positive_mass(model, x0);
  return run_chain_with(
      x0, steps, rng, [&](const State &x, RngStream &r) { return step_L(model, k, x, r); },
      "L(" + k.description() + ")", true);
}

// ---------------------------------------------------------------------------
// Independence samplers
// ---------------------------------------------------------------------------

/// strict: the coefficient must bound p everywhere; deficient: clamp acceptance at 1.
enum class CoefficientMode { strict, deficient };

namespace detail {

template <class State>
void require_independent(const Model<State> &model, std::string_view who) {
  if (!model.independent_proposal()) {
    throw ModelError(std::string(who) + " needs a proposal that does not depend on the current state");
  }
}

} // namespace detail

/**
 * Acceptance-rejection with an absolute majorizing coefficient M, and its
 * Markov variant that repeats x on rejection. Both consume one proposal draw
 * and one uniform per trial, so on a shared stream the accepted proposals of
 * the Markov variant are exactly the acceptance-rejection outputs.
 *
 * On discrete spaces strict mode checks M gamma(z) >= p(z) for every z at
 * construction. On continuous spaces the bound is trusted and only checked at
 * proposed points.
 */
template <class State>
class IndependentMajorizer {
public:
  struct Draw {
    State value;
    std::size_t trials;
  };

  IndependentMajorizer(Model<State> model, double majorizer,
                       CoefficientMode mode = CoefficientMode::strict)
      : model_(std::move(model)), log_M_(std::log(majorizer)), mode_(mode) {
    detail::require_independent(model_, "acceptance-rejection");
    if (!(majorizer > 0.0) || !std::isfinite(majorizer)) {
      throw ConditionViolation("majorizing coefficient must be positive and finite");
    }
    if constexpr (std::is_integral_v<State>) {
      if (mode_ == CoefficientMode::strict) {
        for (State z = 0; z < model_.space().size(); ++z) {
          if (unclamped(z) > 1.0 + kConstraintSlack) {
            throw ConditionViolation("M gamma(z) < p(z) at z = " + detail::to_text(z) +
                                     "; M must be at least max p/gamma");
          }
        }
      }
    }
  }

  /// p(y) / (M gamma(y)), or min{., 1} in deficient mode.
  double acceptance(const State &y) const {
    const double a = unclamped(y);
    if (mode_ == CoefficientMode::deficient) {
      return std::min(a, 1.0);
    }
    if (a > 1.0 + kConstraintSlack) {
      throw ConditionViolation("majorization violated at proposed y = " + detail::to_text(y));
    }
    return std::min(a, 1.0);
  }

  /// Kernel view: the acceptance of a move x -> y depends on y only.
  double alpha(const State &, const State &y) const { return acceptance(y); }

  Draw ar_sample(RngStream &rng) const {
    for (std::size_t trials = 1;; ++trials) {
      const State y = model_.sample(y_anchor(), rng);
      const double r = rng.uniform();
      if (r <= acceptance(y)) {
        return {y, trials};
      }
    }
  }

  StepOutcome<State> step_imar(const State &x, RngStream &rng) const {
    const State y = model_.sample(x, rng);
    const double r = rng.uniform();
    return detail::threshold(x, y, r, acceptance(y), Duplication::type_y);
  }

  const Model<State> &model() const noexcept { return model_; }
  double majorizer() const noexcept { return std::exp(log_M_); }
  CoefficientMode mode() const noexcept { return mode_; }

private:
  double unclamped(const State &y) const {
    return std::exp(detail::log_div(model_.log_p(y), log_M_ + model_.log_gamma(y, y)));
  }
  // Any state works as the conditioning argument of an independent proposal.
  State y_anchor() const { return State{}; }

  Model<State> model_;
  double log_M_;
  CoefficientMode mode_;
};

/**
 * Independence Markovian minorizing sampler with absolute coefficient m: from x,
 * move to a fresh y ~ gamma with probability m gamma(x)/p(x), which depends on
 * x only. step_imir draws y before the uniform; step_imj draws the uniform
 * first and y only on acceptance. The two schedules have the same law but
 * different stream consumption.
 */
template <class State>
class IndependentMinorizer {
public:
  IndependentMinorizer(Model<State> model, double minorizer,
                       CoefficientMode mode = CoefficientMode::strict)
      : model_(std::move(model)), log_m_(std::log(minorizer)), mode_(mode) {
    detail::require_independent(model_, "minorizing sampler");
    if (!(minorizer > 0.0) || !std::isfinite(minorizer)) {
      throw ConditionViolation("minorizing coefficient must be positive and finite");
    }
    if constexpr (std::is_integral_v<State>) {
      if (mode_ == CoefficientMode::strict) {
        for (State z = 0; z < model_.space().size(); ++z) {
          if (model_.log_p(z) > kNegInf && unclamped(z) > 1.0 + kConstraintSlack) {
            throw ConditionViolation("m gamma(z) > p(z) at z = " + detail::to_text(z) +
                                     "; m must be at most min p/gamma");
          }
        }
      }
    }
  }

  /// m gamma(x) / p(x), or min{., 1} in deficient mode.
  double acceptance(const State &x) const {
    const double a = unclamped(x);
    if (mode_ == CoefficientMode::deficient) {
      return std::min(a, 1.0);
    }
    if (a > 1.0 + kConstraintSlack) {
      throw ConditionViolation("minorization violated at x = " + detail::to_text(x));
    }
    return std::min(a, 1.0);
  }

  double alpha(const State &x, const State &) const { return acceptance(x); }

  /// Expected number of deliveries of x before it is left, p(x) / (m gamma(x)).
  double expected_duplications(const State &x) const { return 1.0 / acceptance(x); }

  StepOutcome<State> step_imir(const State &x, RngStream &rng) const {
    detail::require_positive_mass(model_, x);
    const State y = model_.sample(x, rng);
    const double r = rng.uniform();
    return detail::threshold(x, y, r, acceptance(x), Duplication::type_x);
  }

  StepOutcome<State> step_imj(const State &x, RngStream &rng) const {
    detail::require_positive_mass(model_, x);
    const double r = rng.uniform();
    if (r > acceptance(x)) {
      return {x, false, Duplication::type_x};
    }
    return {model_.sample(x, rng), true, Duplication::none};
  }

  const Model<State> &model() const noexcept { return model_; }
  double minorizer() const noexcept { return std::exp(log_m_); }

private:
  double unclamped(const State &x) const {
    return std::exp(detail::log_div(log_m_ + model_.log_gamma(x, x), model_.log_p(x)));
  }

  Model<State> model_;
  double log_m_;
  CoefficientMode mode_;
};

} // namespace hastings

#endif // HASTINGS_SAMPLERS_HPP
