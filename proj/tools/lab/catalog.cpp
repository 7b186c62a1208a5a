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

#include "lab/catalog.hpp"

#include <charconv>
#include <system_error>

namespace hastings::lab {

namespace {

std::optional<Role> parse_role(std::string_view text) {
  if (text == "k") return Role::k;
  if (text == "s") return Role::s;
  if (text == "delta") return Role::delta;
  if (text == "M") return Role::M;
  if (text == "m") return Role::m;
  if (text == "C") return Role::C;
  return std::nullopt;
}

struct CatalogEntry {
  std::string_view name;
  ParamSpec::Form form;
  Role role;
};

constexpr CatalogEntry kCatalog[] = {
    {"barker_sum", ParamSpec::Form::barker_sum, Role::k},
    {"barker_harmonic", ParamSpec::Form::barker_harmonic, Role::k},
    {"s_mh", ParamSpec::Form::s_mh, Role::s},
    {"s_special", ParamSpec::Form::s_special, Role::s},
    {"min_product", ParamSpec::Form::min_product, Role::delta},
    {"c_barker", ParamSpec::Form::c_barker, Role::C},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

} // namespace

ParamSpec parse_param(std::string_view text) {
  text = trim(text);
  ParamSpec spec;
  spec.text = std::string(text);
  std::string_view value = text;
  std::optional<Role> role;
  if (const auto eq = text.find('='); eq != std::string_view::npos) {
    role = parse_role(trim(text.substr(0, eq)));
    if (!role) {
      throw ConfigError("parameter '" + spec.text + "': unknown role '" +
                        std::string(trim(text.substr(0, eq))) + "'");
    }
    value = trim(text.substr(eq + 1));
  }
  for (const CatalogEntry &entry : kCatalog) {
    if (value == entry.name) {
      if (role && *role != entry.role) {
        throw ConfigError("parameter '" + spec.text + "': " + std::string(entry.name) +
                          " has role " + std::string(to_string(entry.role)));
      }
      spec.form = entry.form;
      spec.role = entry.role;
      return spec;
    }
  }
  if (!role) {
    throw ConfigError("parameter '" + spec.text + "' is neither role=value nor a catalog name");
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("parameter '" + spec.text + "': '" + std::string(value) +
                      "' is not a number or catalog name");
  }
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw ConfigError("parameter '" + spec.text + "': value must be finite and nonnegative");
  }
  spec.form = ParamSpec::Form::constant;
  spec.role = *role;
  spec.value = v;
  return spec;
}

RuleSpec parse_rule(std::string_view text) {
  text = trim(text);
  RuleSpec spec;
  spec.text = std::string(text);
  std::string_view name = text;
  if (const auto colon = text.find(':'); colon != std::string_view::npos) {
    name = trim(text.substr(0, colon));
    spec.param = parse_param(text.substr(colon + 1));
  }
  if (name == "L") {
    spec.two_stage = true;
    spec.name = RuleName::M;
    if (!spec.param) {
      throw ConfigError("rule '" + spec.text + "': L needs a k parameter");
    }
    return spec;
  }
  static constexpr RuleName kNames[] = {RuleName::M,  RuleName::MH,  RuleName::BK,  RuleName::HA,
                                        RuleName::ST, RuleName::MAR, RuleName::MIR, RuleName::SPECIAL};
  for (RuleName candidate : kNames) {
    if (name == to_string(candidate)) {
      spec.name = candidate;
      return spec;
    }
  }
  throw ConfigError("unknown rule '" + std::string(name) + "'");
}

std::vector<AcceptanceRule<DiscreteState>> sweep_rules(const DiscreteModel &model) {
  using Rule = AcceptanceRule<DiscreteState>;
  using Fn = SymmetricFn<DiscreteState>;
  const Fn two = Fn::constant(Role::C, 2.0);
  return {
      Rule::mh(),
      Rule::bk(),
      Rule::hastings(Fn::constant(Role::s, 1.0)),
      Rule::hastings(s_mh(model)),
      Rule::hastings(s_special(model)),
      Rule::stein(delta_min_product(model)),
      Rule::algorithm_m(k_times_H(model, 1.5)),
      Rule::algorithm_m(k_between(model, 0.5)),
      Rule::algorithm_m(k_times_L(model, 0.5)),
      Rule::mar(Fn::constant(Role::C, 1.0)),
      Rule::mar(C_barker(model)),
      Rule::mar(two),
      Rule::mir(m_from_C(model, two)),
      Rule::mir(m_from_C(model, C_barker(model))),
  };
}

} // namespace hastings::lab
