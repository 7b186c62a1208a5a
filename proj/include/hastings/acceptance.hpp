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

#ifndef HASTINGS_ACCEPTANCE_HPP
#define HASTINGS_ACCEPTANCE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "hastings/errors.hpp"
#include "hastings/model.hpp"
#include "hastings/rng.hpp"
#include "hastings/symmetric_fn.hpp"

namespace hastings {

/// Exact algebraic identities hold to this absolute tolerance on probabilities.
inline constexpr double kIdentityTol = 1e-12;
/// Relative slack granted to role constraints (M >= H, m <= L, C >= 1, alpha <= 1).
inline constexpr double kConstraintSlack = 1e-12;

namespace detail {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// log(a b) from log a, log b; a zero factor wins over an infinite one.
inline double log_mul(double a, double b) noexcept {
  if (a == kNegInf || b == kNegInf) {
    return kNegInf;
  }
  return a + b;
}

/// log(num / den). 0/x = 0, x/0 = +inf for x > 0; 0/0 and inf/inf are NaN.
inline double log_div(double num, double den) noexcept {
  if (num == kNegInf) {
    return den == kNegInf ? kNaN : kNegInf;
  }
  if (den == kNegInf) {
    return kPosInf;
  }
  if (num == kPosInf && den == kPosInf) {
    return kNaN;
  }
  return num - den;
}

/// log(e^a + e^b)
inline double log_add(double a, double b) noexcept {
  if (a < b) {
    std::swap(a, b);
  }
  if (b == kNegInf || a == kPosInf) {
    return a;
  }
  return a + std::log1p(std::exp(b - a));
}

/// log of (1 + e^{-t})^{-1}, stable for |t| in the hundreds.
inline double log_barker(double t) noexcept {
  if (t == kPosInf) {
    return 0.0;
  }
  if (t == kNegInf) {
    return kNegInf;
  }
  return t >= 0.0 ? -std::log1p(std::exp(-t)) : t - std::log1p(std::exp(t));
}

/// Mass-to-proposal ratio p/gamma in logs. Zero mass gives 0 whatever gamma is.
inline double log_mass_ratio(double log_p, double log_g) noexcept {
  if (log_p == kNegInf) {
    return kNegInf;
  }
  if (log_g == kNegInf) {
    return kPosInf;
  }
  return log_p - log_g;
}

inline double log_upper_slack() noexcept { return std::log1p(kConstraintSlack); }
inline double log_lower_slack() noexcept { return std::log1p(-kConstraintSlack); }

} // namespace detail

/// The four log quantities every acceptance probability is built from.
struct PairLogs {
  double p_x;  ///< log p(x)
  double p_y;  ///< log p(y)
  double g_xy; ///< log gamma(x | y)
  double g_yx; ///< log gamma(y | x)

  /// log p(x)/gamma(x|y)
  double w_x() const noexcept { return detail::log_mass_ratio(p_x, g_xy); }
  /// log p(y)/gamma(y|x)
  double w_y() const noexcept { return detail::log_mass_ratio(p_y, g_yx); }
  /// log p(x) gamma(y|x), the forward flux
  double forward() const noexcept { return detail::log_mul(p_x, g_yx); }
  /// log p(y) gamma(x|y), the backward flux
  double backward() const noexcept { return detail::log_mul(p_y, g_xy); }
};

template <class State>
PairLogs pair_logs(const Model<State> &model, const State &x, const State &y) {
  return {model.log_p(x), model.log_p(y), model.log_gamma(x, y), model.log_gamma(y, x)};
}

namespace detail {

template <class State>
[[noreturn]] void throw_degenerate(std::string_view what, const State &x, const State &y) {
  throw DegeneratePairError(std::string(what) + " at " + pair_text(x, y));
}

template <class State>
void require_current_mass(const PairLogs &t, const State &x, const State &y) {
  if (t.p_x == kNegInf) {
    throw_degenerate("current state has zero mass", x, y);
  }
}

/// log of the MH ratio gamma(x|y)p(y) / (p(x)gamma(y|x)).
template <class State>
double log_mh_ratio(const PairLogs &t, const State &x, const State &y) {
  const double r = log_div(t.backward(), t.forward());
  if (std::isnan(r)) {
    throw_degenerate("both fluxes vanish", x, y);
  }
  return r;
}

template <class State>
void require_role(const SymmetricFn<State> &fn, Role role, std::string_view rule) {
  if (fn.role() != role) {
    throw RoleMismatch(std::string(rule) + " needs a role-" + std::string(to_string(role)) +
                       " function, got role " + std::string(to_string(fn.role())) + " (" +
                       fn.description() + ")");
  }
}

template <class State>
double clamp_probability(double alpha, std::string_view what, const State &x, const State &y) {
  if (std::isnan(alpha) || alpha > 1.0 + kConstraintSlack) {
    throw ConditionViolation(std::string(what) + " violated at " + pair_text(x, y) +
                             ": acceptance " + to_text(alpha) + " > 1");
  }
  return std::min(alpha, 1.0);
}

} // namespace detail

/// Regimes of Algorithm M. Ties go to the closed branches: k = H is `above`, k = L is `below`.
enum class Regime { above, between, below };

constexpr std::string_view to_string(Regime r) noexcept {
  switch (r) {
  case Regime::above: return "k>=H";
  case Regime::between: return "L<k<H";
  case Regime::below: return "k<=L";
  }
  return "?";
}

struct Bounds {
  double L;
  double H;
  double log_L;
  double log_H;

  Regime classify(double log_k) const noexcept {
    if (log_k >= log_H) {
      return Regime::above;
    }
    if (log_k > log_L) {
      return Regime::between;
    }
    return Regime::below;
  }
};

/// L = min and H = max of p(x)/gamma(x|y) and p(y)/gamma(y|x). A zero proposal
/// density with positive mass gives +inf.
template <class State>
Bounds bounds_LH(const Model<State> &model, const State &x, const State &y) {
  const PairLogs t = pair_logs(model, x, y);
  const double wx = t.w_x();
  const double wy = t.w_y();
  if (wx == kNegInf && wy == kNegInf) {
    detail::throw_degenerate("both states have zero mass", x, y);
  }
  const double lo = std::min(wx, wy);
  const double hi = std::max(wx, wy);
  return {std::exp(lo), std::exp(hi), lo, hi};
}

template <class State>
double alpha_mh(const Model<State> &model, const State &x, const State &y) {
  const PairLogs t = pair_logs(model, x, y);
  return std::exp(std::min(detail::log_mh_ratio(t, x, y), 0.0));
}

template <class State>
double alpha_bk(const Model<State> &model, const State &x, const State &y) {
  const PairLogs t = pair_logs(model, x, y);
  return std::exp(detail::log_barker(detail::log_mh_ratio(t, x, y)));
}

/// s(x,y) times the Barker probability; throws if the result leaves [0, 1].
template <class State>
double alpha_hastings(const Model<State> &model, const SymmetricFn<State> &s, const State &x,
                      const State &y) {
  detail::require_role(s, Role::s, "HA");
  const PairLogs t = pair_logs(model, x, y);
  const double log_s = s.log_value(x, y);
  if (std::isnan(log_s)) {
    throw ConditionViolation("s must be nonnegative at " + detail::pair_text(x, y));
  }
  const double log_alpha = detail::log_mul(log_s, detail::log_barker(detail::log_mh_ratio(t, x, y)));
  return detail::clamp_probability(std::exp(log_alpha), "Hastings condition", x, y);
}

template <class State>
double alpha_stein(const Model<State> &model, const SymmetricFn<State> &delta, const State &x,
                   const State &y) {
  detail::require_role(delta, Role::delta, "ST");
  const PairLogs t = pair_logs(model, x, y);
  detail::require_current_mass(t, x, y);
  const double log_delta = delta.log_value(x, y);
  if (std::isnan(log_delta)) {
    throw ConditionViolation("delta must be nonnegative at " + detail::pair_text(x, y));
  }
  const double forward = t.forward();
  if (forward == kNegInf) {
    // y is never proposed from x; only delta = 0 keeps the bound.
    if (log_delta == kNegInf) {
      return 0.0;
    }
    throw ConditionViolation("Stein condition violated at " + detail::pair_text(x, y) +
                             ": delta > 0 where gamma(y|x) = 0");
  }
  return detail::clamp_probability(std::exp(detail::log_div(log_delta, forward)), "Stein condition",
                                   x, y);
}

namespace detail {

template <class State>
double log_k_checked(const SymmetricFn<State> &k, const State &x, const State &y) {
  const double log_k = k.log_value(x, y);
  if (!(log_k > kNegInf)) {
    throw ConditionViolation("k must be positive at " + pair_text(x, y));
  }
  return log_k;
}

/// log of p(y) / (k gamma(y|x)); an impossible move (0/0) counts as zero.
inline double log_y_factor(const PairLogs &t, double log_k) {
  const double v = log_div(t.p_y, log_mul(log_k, t.g_yx));
  return std::isnan(v) ? kNegInf : v;
}

/// log of k gamma(x|y) / p(x)
inline double log_x_factor(const PairLogs &t, double log_k) {
  return log_div(log_mul(log_k, t.g_xy), t.p_x);
}

} // namespace detail

/// Algorithm M: min{k gamma(x|y)/p(x), 1} * min{p(y)/(k gamma(y|x)), 1}.
template <class State>
double alpha_m(const Model<State> &model, const SymmetricFn<State> &k, const State &x,
               const State &y) {
  detail::require_role(k, Role::k, "M");
  const PairLogs t = pair_logs(model, x, y);
  detail::require_current_mass(t, x, y);
  const double log_k = detail::log_k_checked(k, x, y);
  const double fx = std::min(detail::log_x_factor(t, log_k), 0.0);
  const double fy = std::min(detail::log_y_factor(t, log_k), 0.0);
  return std::exp(fx + fy);
}

template <class State>
Regime piecewise_regime(const Model<State> &model, const SymmetricFn<State> &k, const State &x,
                        const State &y) {
  return bounds_LH(model, x, y).classify(detail::log_k_checked(k, x, y));
}

/// The same acceptance as alpha_m, evaluated branch by branch against L and H.
template <class State>
double alpha_m_piecewise(const Model<State> &model, const SymmetricFn<State> &k, const State &x,
                         const State &y) {
  detail::require_role(k, Role::k, "M");
  const PairLogs t = pair_logs(model, x, y);
  detail::require_current_mass(t, x, y);
  const double log_k = detail::log_k_checked(k, x, y);
  switch (bounds_LH(model, x, y).classify(log_k)) {
  case Regime::above:
    return std::exp(detail::log_y_factor(t, log_k));
  case Regime::between:
    return std::exp(std::min(detail::log_mh_ratio(t, x, y), 0.0));
  case Regime::below:
    break;
  }
  return std::exp(detail::log_x_factor(t, log_k));
}

/**
 * Markovian acceptance-rejection: p(y) / (M(x,y) gamma(y|x)). Accepts either a
 * role-M majorizer (checked against H with relative slack) or a role-C factor,
 * in which case M = C H.
 */
template <class State>
double alpha_mar(const Model<State> &model, const SymmetricFn<State> &param, const State &x,
                 const State &y) {
  const Bounds b = bounds_LH(model, x, y);
  double log_M = 0.0;
  if (param.role() == Role::M) {
    log_M = param.log_value(x, y);
    if (!(log_M >= b.log_H + detail::log_lower_slack())) {
      throw ConditionViolation("not a majorizer at " + detail::pair_text(x, y) + ": M = " +
                               detail::to_text(std::exp(log_M)) + " < H = " + detail::to_text(b.H));
    }
  } else if (param.role() == Role::C) {
    const double log_C = param.log_value(x, y);
    if (!(log_C >= detail::log_lower_slack())) {
      throw ConditionViolation("C must be >= 1 at " + detail::pair_text(x, y) + ", got " +
                               detail::to_text(std::exp(log_C)));
    }
    log_M = detail::log_mul(log_C, b.log_H);
  } else {
    throw RoleMismatch("MAR needs a role-M or role-C function, got role " +
                       std::string(to_string(param.role())) + " (" + param.description() + ")");
  }
  const PairLogs t = pair_logs(model, x, y);
  return detail::clamp_probability(std::exp(detail::log_y_factor(t, log_M)), "majorization", x, y);
}

/// Markovian minorizing: m(x,y) gamma(x|y) / p(x), with m <= L.
template <class State>
double alpha_mir(const Model<State> &model, const SymmetricFn<State> &m, const State &x,
                 const State &y) {
  detail::require_role(m, Role::m, "MIR");
  const PairLogs t = pair_logs(model, x, y);
  detail::require_current_mass(t, x, y);
  const Bounds b = bounds_LH(model, x, y);
  const double log_m = m.log_value(x, y);
  if (!(log_m <= b.log_L + detail::log_upper_slack())) {
    throw ConditionViolation("not a minorizer at " + detail::pair_text(x, y) + ": m = " +
                             detail::to_text(std::exp(log_m)) + " > L = " + detail::to_text(b.L));
  }
  return detail::clamp_probability(std::exp(detail::log_x_factor(t, log_m)), "minorization", x, y);
}

/// min{gamma(x|y)/p(x), 1} * min{p(y)/gamma(y|x), 1}; Algorithm M with k = 1.
template <class State>
double alpha_special(const Model<State> &model, const State &x, const State &y) {
  const PairLogs t = pair_logs(model, x, y);
  detail::require_current_mass(t, x, y);
  const double fx = std::min(detail::log_x_factor(t, 0.0), 0.0);
  const double fy = std::min(detail::log_y_factor(t, 0.0), 0.0);
  return std::exp(fx + fy);
}

// ---------------------------------------------------------------------------
// Validation of symmetric functions against their role constraint
// ---------------------------------------------------------------------------

enum class FindingKind {
  asymmetry,
  nonpositive,
  hastings_condition, ///< s(x,y) makes alpha_HA exceed 1
  stein_condition,    ///< delta(x,y) > p(x) gamma(y|x)
  below_majorizing,   ///< M < H
  above_minorizing,   ///< m > L
  coefficient_below_one,
};

constexpr std::string_view to_string(FindingKind kind) noexcept {
  switch (kind) {
  case FindingKind::asymmetry: return "asymmetry";
  case FindingKind::nonpositive: return "nonpositive";
  case FindingKind::hastings_condition: return "hastings_condition";
  case FindingKind::stein_condition: return "stein_condition";
  case FindingKind::below_majorizing: return "below_majorizing";
  case FindingKind::above_minorizing: return "above_minorizing";
  case FindingKind::coefficient_below_one: return "coefficient_below_one";
  }
  return "?";
}

template <class State>
struct Finding {
  State x;
  State y;
  FindingKind kind;
  double value;     ///< offending quantity (alpha_HA, M, m, C, f(x,y) ...)
  double magnitude; ///< how far past the constraint
};

template <class State>
struct ValidationReport {
  std::vector<Finding<State>> findings;
  std::size_t pairs_checked = 0;
  std::size_t degenerate_pairs = 0;
  double worst_asymmetry = 0.0;
  double worst_constraint = 0.0;

  bool clean() const noexcept { return findings.empty(); }
};

/// Every ordered pair of a discrete model, diagonal included.
inline std::vector<std::pair<DiscreteState, DiscreteState>> all_ordered_pairs(const DiscreteModel &model) {
  const std::size_t n = model.space().size();
  std::vector<std::pair<DiscreteState, DiscreteState>> pairs;
  pairs.reserve(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      pairs.emplace_back(x, y);
    }
  }
  return pairs;
}

/**
 * Random proposal-reachable pairs: x uniform over a discrete space (or
 * 2 N(0,1) on a continuous one), then y ~ gamma(. | x).
 */
template <class State>
std::vector<std::pair<State, State>> sample_pairs(const Model<State> &model, std::size_t count,
                                                  RngStream &rng) {
  std::vector<std::pair<State, State>> pairs;
  pairs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    State x{};
    if constexpr (std::is_integral_v<State>) {
      const auto n = static_cast<double>(model.space().size());
      x = std::min(static_cast<State>(rng.uniform() * n), static_cast<State>(n - 1));
    } else {
      x = 2.0 * rng.normal();
    }
    pairs.emplace_back(x, model.sample(x, rng));
  }
  return pairs;
}

template <class State>
ValidationReport<State> validate_symmetric_fn(const Model<State> &model, const SymmetricFn<State> &fn,
                                              const std::vector<std::pair<State, State>> &pairs) {
  ValidationReport<State> report;
  auto record = [&report](const State &x, const State &y, FindingKind kind, double value,
                          double magnitude) {
    report.findings.push_back({x, y, kind, value, magnitude});
    if (kind == FindingKind::asymmetry) {
      report.worst_asymmetry = std::max(report.worst_asymmetry, magnitude);
    } else {
      report.worst_constraint = std::max(report.worst_constraint, magnitude);
    }
  };

  for (const auto &[x, y] : pairs) {
    ++report.pairs_checked;
    const double fxy = fn(x, y);
    const double fyx = fn(y, x);
    if (fxy != fyx) {
      const double diff = std::abs(fxy - fyx);
      if (!(diff <= kIdentityTol * std::max(std::abs(fxy), std::abs(fyx)))) {
        record(x, y, FindingKind::asymmetry, fxy, diff);
      }
    }
    const double log_f = fn.log_value(x, y);
    const bool zero_allowed = fn.role() == Role::s || fn.role() == Role::delta;
    if (std::isnan(log_f) || (!zero_allowed && log_f == kNegInf)) {
      record(x, y, FindingKind::nonpositive, fxy, std::abs(fxy));
      continue;
    }

    try {
      switch (fn.role()) {
      case Role::k:
        break;
      case Role::s: {
        const double alpha = fxy * alpha_bk(model, x, y);
        if (alpha > 1.0 + kConstraintSlack) {
          record(x, y, FindingKind::hastings_condition, alpha, alpha - 1.0);
        }
        break;
      }
      case Role::delta: {
        const PairLogs t = pair_logs(model, x, y);
        detail::require_current_mass(t, x, y);
        const double ratio = std::exp(detail::log_div(log_f, t.forward()));
        if (std::isnan(ratio)) {
          break; // delta = 0 on an impossible move
        }
        if (ratio > 1.0 + kConstraintSlack) {
          record(x, y, FindingKind::stein_condition, fxy, fxy - std::exp(t.forward()));
        }
        break;
      }
      case Role::M: {
        const Bounds b = bounds_LH(model, x, y);
        if (log_f < b.log_H + detail::log_lower_slack()) {
          record(x, y, FindingKind::below_majorizing, fxy, b.H - fxy);
        }
        break;
      }
      case Role::m: {
        const Bounds b = bounds_LH(model, x, y);
        if (log_f > b.log_L + detail::log_upper_slack()) {
          record(x, y, FindingKind::above_minorizing, fxy, fxy - b.L);
        }
        break;
      }
      case Role::C:
        if (log_f < detail::log_lower_slack()) {
          record(x, y, FindingKind::coefficient_below_one, fxy, 1.0 - fxy);
        }
        break;
      }
    } catch (const DegeneratePairError &) {
      ++report.degenerate_pairs;
    }
  }
  return report;
}

/// Exhaustive over ordered pairs when n <= 64, otherwise `sampled` random pairs.
inline ValidationReport<DiscreteState> validate_symmetric_fn(const DiscreteModel &model,
                                                             const SymmetricFn<DiscreteState> &fn,
                                                             RngStream &rng,
                                                             std::size_t sampled = 4096) {
  if (model.space().size() <= 64) {
    return validate_symmetric_fn(model, fn, all_ordered_pairs(model));
  }
  return validate_symmetric_fn(model, fn, sample_pairs(model, sampled, rng));
}

// ---------------------------------------------------------------------------
// Rule registry
// ---------------------------------------------------------------------------

enum class RuleName { M, MH, BK, HA, ST, MAR, MIR, SPECIAL };

constexpr std::string_view to_string(RuleName name) noexcept {
  switch (name) {
  case RuleName::M: return "M";
  case RuleName::MH: return "MH";
  case RuleName::BK: return "BK";
  case RuleName::HA: return "HA";
  case RuleName::ST: return "ST";
  case RuleName::MAR: return "MAR";
  case RuleName::MIR: return "MIR";
  case RuleName::SPECIAL: return "SPECIAL";
  }
  return "?";
}

/// A named acceptance rule bound to the parameter its name requires.
template <class State>
class AcceptanceRule {
public:
  using Param = SymmetricFn<State>;

  static AcceptanceRule make(RuleName name, std::optional<Param> param = std::nullopt) {
    const bool needs_param =
        !(name == RuleName::MH || name == RuleName::BK || name == RuleName::SPECIAL);
    if (!needs_param) {
      if (param) {
        throw RoleMismatch(std::string(to_string(name)) + " takes no parameter");
      }
      return AcceptanceRule(name, std::nullopt);
    }
    if (!param) {
      throw RoleMismatch(std::string(to_string(name)) + " requires a parameter");
    }
    const Role role = param->role();
    bool ok = false;
    switch (name) {
    case RuleName::M: ok = role == Role::k; break;
    case RuleName::HA: ok = role == Role::s; break;
    case RuleName::ST: ok = role == Role::delta; break;
    case RuleName::MAR: ok = role == Role::M || role == Role::C; break;
    case RuleName::MIR: ok = role == Role::m; break;
    default: break;
    }
    if (!ok) {
      throw RoleMismatch(std::string(to_string(name)) + " cannot take a role-" +
                         std::string(to_string(role)) + " parameter");
    }
    return AcceptanceRule(name, std::move(param));
  }

  static AcceptanceRule mh() { return make(RuleName::MH); }
  static AcceptanceRule bk() { return make(RuleName::BK); }
  static AcceptanceRule special() { return make(RuleName::SPECIAL); }
  static AcceptanceRule algorithm_m(Param k) { return make(RuleName::M, std::move(k)); }
  static AcceptanceRule hastings(Param s) { return make(RuleName::HA, std::move(s)); }
  static AcceptanceRule stein(Param delta) { return make(RuleName::ST, std::move(delta)); }
  static AcceptanceRule mar(Param majorizer) { return make(RuleName::MAR, std::move(majorizer)); }
  static AcceptanceRule mir(Param minorizer) { return make(RuleName::MIR, std::move(minorizer)); }

  RuleName name() const noexcept { return name_; }
  const std::optional<Param> &param() const noexcept { return param_; }

  std::string label() const {
    std::string out(to_string(name_));
    if (param_) {
      out += "(" + param_->description() + ")";
    }
    return out;
  }

  double alpha(const Model<State> &model, const State &x, const State &y) const {
    switch (name_) {
    case RuleName::MH: return alpha_mh(model, x, y);
    case RuleName::BK: return alpha_bk(model, x, y);
    case RuleName::SPECIAL: return alpha_special(model, x, y);
    case RuleName::M: return alpha_m(model, *param_, x, y);
    case RuleName::HA: return alpha_hastings(model, *param_, x, y);
    case RuleName::ST: return alpha_stein(model, *param_, x, y);
    case RuleName::MAR: return alpha_mar(model, *param_, x, y);
    case RuleName::MIR: return alpha_mir(model, *param_, x, y);
    }
    return 0.0;
  }

private:
  AcceptanceRule(RuleName name, std::optional<Param> param) : name_(name), param_(std::move(param)) {}

  RuleName name_;
  std::optional<Param> param_;
};

} // namespace hastings

#endif // HASTINGS_ACCEPTANCE_HPP
