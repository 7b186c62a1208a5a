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

#ifndef HASTINGS_LAB_CATALOG_HPP
#define HASTINGS_LAB_CATALOG_HPP

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hastings/hastings.hpp"
#include "lab/config.hpp"

namespace hastings::lab {

/**
 * Parameter formula from the fixed catalog.
 *
 *   role=<number>     constant, role one of k s delta M m C
 *   barker_sum        k = p(x)/gamma(x|y) + p(y)/gamma(y|x)
 *   barker_harmonic   k = (gamma(x|y)/p(x) + gamma(y|x)/p(y))^-1
 *   s_mh              s giving Metropolis-Hastings
 *   s_special         s giving the special rule
 *   min_product       delta = min{p(y) gamma(x|y), p(x) gamma(y|x)}
 *   c_barker          C giving Barker under MAR
 *
 * A catalog name may also be written with its role, as in k=barker_sum.
 */
struct ParamSpec {
  enum class Form { constant, barker_sum, barker_harmonic, s_mh, s_special, min_product, c_barker };
  Role role = Role::k;
  Form form = Form::constant;
  double value = 0.0;
  std::string text;
};

ParamSpec parse_param(std::string_view text);

/// NAME or NAME:PARAM, NAME in MH BK SPECIAL M HA ST MAR MIR L.
struct RuleSpec {
  std::string text;
  bool two_stage = false;
  RuleName name = RuleName::MH;
  std::optional<ParamSpec> param;
};

RuleSpec parse_rule(std::string_view text);

template <class State>
SymmetricFn<State> build_param(const ParamSpec &spec, const Model<State> &model) {
  using Fn = SymmetricFn<State>;
  switch (spec.form) {
  case ParamSpec::Form::constant: return Fn::constant(spec.role, spec.value);
  case ParamSpec::Form::barker_sum: return k_barker_sum(model);
  case ParamSpec::Form::barker_harmonic: return k_barker_harmonic(model);
  case ParamSpec::Form::s_mh: return s_mh(model);
  case ParamSpec::Form::s_special: return s_special(model);
  case ParamSpec::Form::min_product: return delta_min_product(model);
  case ParamSpec::Form::c_barker: return C_barker(model);
  }
  throw ConfigError("unknown parameter form");
}

/// A configured rule: either a single-stage AcceptanceRule or the two-stage algorithm.
template <class State>
class ConfiguredRule {
public:
  static ConfiguredRule make(const RuleSpec &spec, const Model<State> &model) {
    ConfiguredRule out;
    if (spec.two_stage) {
      if (!spec.param || spec.param->role != Role::k) {
        throw ConfigError("rule '" + spec.text + "': L needs a role-k parameter");
      }
      out.k_ = build_param(*spec.param, model);
      out.label_ = "L(" + out.k_->description() + ")";
      return out;
    }
    std::optional<SymmetricFn<State>> param;
    if (spec.param) {
      param = build_param(*spec.param, model);
      // Under MIR a C factor stands for the minorizer L / C.
      if (spec.name == RuleName::MIR && param->role() == Role::C) {
        param = m_from_C(model, *param);
      }
    }
    try {
      out.rule_ = AcceptanceRule<State>::make(spec.name, std::move(param));
    } catch (const RoleMismatch &e) {
      throw ConfigError("rule '" + spec.text + "': " + e.what());
    }
    out.label_ = out.rule_->label();
    return out;
  }

  const std::string &label() const noexcept { return label_; }
  bool two_stage() const noexcept { return k_.has_value(); }
  const std::optional<AcceptanceRule<State>> &rule() const noexcept { return rule_; }
  const std::optional<SymmetricFn<State>> &k() const noexcept { return k_; }

  double alpha(const Model<State> &model, const State &x, const State &y) const {
    return k_ ? alpha_m(model, *k_, x, y) : rule_->alpha(model, x, y);
  }

  StepOutcome<State> step(const Model<State> &model, const State &x, RngStream &rng) const {
    return k_ ? step_L(model, *k_, x, rng) : step_generic(model, *rule_, x, rng);
  }

  ChainRun<State> run(const Model<State> &model, const State &x0, std::size_t steps,
                      RngStream &rng) const {
    return k_ ? run_chain_L(model, *k_, x0, steps, rng) : run_chain(model, *rule_, x0, steps, rng);
  }

private:
  ConfiguredRule() = default;

  std::string label_;
  std::optional<AcceptanceRule<State>> rule_;
  std::optional<SymmetricFn<State>> k_;
};

/// Symmetric k = factor * H(x,y).
inline SymmetricFn<DiscreteState> k_times_H(const DiscreteModel &model, double factor) {
  return SymmetricFn<DiscreteState>::symmetric(
      Role::k,
      [model, lf = std::log(factor)](const DiscreteState &x, const DiscreteState &y) {
        return bounds_LH(model, x, y).log_H + lf;
      },
      "k=" + detail::to_text(factor) + "H");
}

/// Symmetric k = factor * L(x,y).
inline SymmetricFn<DiscreteState> k_times_L(const DiscreteModel &model, double factor) {
  return SymmetricFn<DiscreteState>::symmetric(
      Role::k,
      [model, lf = std::log(factor)](const DiscreteState &x, const DiscreteState &y) {
        return bounds_LH(model, x, y).log_L + lf;
      },
      "k=" + detail::to_text(factor) + "L");
}

/// Symmetric k = L^(1-t) H^t, strictly between L and H wherever L < H.
inline SymmetricFn<DiscreteState> k_between(const DiscreteModel &model, double t) {
  return SymmetricFn<DiscreteState>::symmetric(
      Role::k,
      [model, t](const DiscreteState &x, const DiscreteState &y) {
        const Bounds b = bounds_LH(model, x, y);
        return (1.0 - t) * b.log_L + t * b.log_H;
      },
      "k=L^" + detail::to_text(1.0 - t) + "H^" + detail::to_text(t));
}

/**
 * The rule families of the verification sweep: MH, BK, HA with s = 1, s_mh
 * and s_special, ST with min_product, M with k in each regime, MAR with
 * C = 1, c_barker and 2, MIR with m = L/2 and m = L/c_barker.
 */
std::vector<AcceptanceRule<DiscreteState>> sweep_rules(const DiscreteModel &model);

} // namespace hastings::lab

#endif // HASTINGS_LAB_CATALOG_HPP
