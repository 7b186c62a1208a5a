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

#include "lab/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include "hastings/errors.hpp"

namespace hastings::lab {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string &s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string strip_quotes(std::string s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = trim(s.substr(1, s.size() - 2));
  }
  return s;
}

double to_double(const std::string &text, const std::string &key) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(key + ": expected a number, got '" + t + "'");
  }
  return v;
}

template <class Int>
Int to_integer(const std::string &text, const std::string &key) {
  const std::string t = trim(text);
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(key + ": expected a nonnegative integer, got '" + t + "'");
  }
  return v;
}

std::vector<double> to_vector(const std::string &text, const std::string &key) {
  std::string t = text;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream is(t);
  std::vector<double> out;
  std::string token;
  while (is >> token) {
    out.push_back(to_double(token, key));
  }
  if (out.empty()) {
    throw ConfigError(key + ": empty list");
  }
  return out;
}

std::vector<std::string> split(const std::string &text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) {
    item = trim(item);
    if (!item.empty()) {
      out.push_back(item);
    }
  }
  return out;
}

using Known = std::set<std::string, std::less<>>;

void reject_unknown(const pt::ptree &tree, const std::string &section, const Known &known) {
  for (const auto &[key, value] : tree) {
    if (!known.contains(key)) {
      throw ConfigError("[" + section + "] unknown key '" + key + "'");
    }
  }
}

std::optional<std::string> get(const pt::ptree &tree, const std::string &section,
                               const std::string &key) {
  const auto child = tree.get_child_optional(pt::ptree::path_type(section + "." + key, '.'));
  if (!child) {
    return std::nullopt;
  }
  return strip_quotes(child->data());
}

ModelSpec parse_model(const pt::ptree &root) {
  ModelSpec spec;
  const auto section = root.get_child_optional("model");
  if (!section) {
    throw ConfigError("missing [model] section");
  }
  reject_unknown(*section, "model", {"kind", "p", "gamma", "proposal", "sigma", "a", "start"});
  const std::string kind = get(root, "model", "kind").value_or("discrete");
  if (kind == "discrete") {
    spec.kind = ModelSpec::Kind::discrete;
    const auto p = get(root, "model", "p");
    const auto gamma = get(root, "model", "gamma");
    if (!p || !gamma) {
      throw ConfigError("[model] discrete models need p and gamma");
    }
    spec.p = to_vector(*p, "[model] p");
    std::string rows = *gamma;
    std::replace(rows.begin(), rows.end(), ';', '|');
    for (const std::string &row : split(rows, '|')) {
      spec.gamma.push_back(to_vector(row, "[model] gamma"));
    }
  } else if (kind == "normal") {
    spec.kind = ModelSpec::Kind::normal;
    const std::string proposal = get(root, "model", "proposal").value_or("random_walk");
    if (proposal == "random_walk") {
      spec.proposal = ProposalKind::random_walk;
    } else if (proposal == "autoregressive") {
      spec.proposal = ProposalKind::autoregressive;
    } else {
      throw ConfigError("[model] proposal must be random_walk or autoregressive, got '" + proposal + "'");
    }
    if (auto s = get(root, "model", "sigma")) {
      spec.sigma = to_double(*s, "[model] sigma");
    }
    if (auto a = get(root, "model", "a")) {
      spec.a = to_double(*a, "[model] a");
    }
  } else {
    throw ConfigError("[model] kind must be discrete or normal, got '" + kind + "'");
  }
  return spec;
}

} // namespace

std::optional<Mode> parse_mode(const std::string &text) {
  if (text == "run") return Mode::run;
  if (text == "verify") return Mode::verify;
  if (text == "compare") return Mode::compare;
  if (text == "map") return Mode::map;
  return std::nullopt;
}

ExperimentConfig parse_config(std::istream &in) {
  pt::ptree root;
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error &e) {
    throw ConfigError(std::string("malformed config: ") + e.message() + " at line " +
                      std::to_string(e.line()));
  }
  for (const auto &[name, section] : root) {
    if (name != "model" && name != "rule" && name != "run" && name != "sweep") {
      throw ConfigError("unknown section [" + name + "]");
    }
    if (!section.data().empty()) {
      throw ConfigError("key '" + name + "' outside any section");
    }
  }

  ExperimentConfig cfg;
  cfg.model = parse_model(root);
  if (auto s = get(root, "model", "start")) {
    cfg.start = to_double(*s, "[model] start");
  }

  if (const auto rule = root.get_child_optional("rule")) {
    reject_unknown(*rule, "rule", {"name", "rules", "source"});
    const auto name = get(root, "rule", "name");
    const auto rules = get(root, "rule", "rules");
    if (name && rules) {
      throw ConfigError("[rule] give either name or rules, not both");
    }
    if (name) {
      cfg.rules = {*name};
    } else if (rules) {
      cfg.rules = split(*rules, ',');
    }
    cfg.source = get(root, "rule", "source").value_or("");
  }

  if (const auto run = root.get_child_optional("run")) {
    reject_unknown(*run, "run", {"mode", "steps", "seed", "discard", "out"});
    if (auto m = get(root, "run", "mode")) {
      cfg.mode = parse_mode(*m);
      if (!cfg.mode) {
        throw ConfigError("[run] mode must be run, verify, compare or map, got '" + *m + "'");
      }
    }
    if (auto v = get(root, "run", "steps")) {
      cfg.steps = to_integer<std::size_t>(*v, "[run] steps");
    }
    if (auto v = get(root, "run", "seed")) {
      cfg.seed = to_integer<std::uint64_t>(*v, "[run] seed");
    }
    if (auto v = get(root, "run", "discard")) {
      cfg.discard = to_integer<std::size_t>(*v, "[run] discard");
    }
    cfg.out = get(root, "run", "out").value_or("");
  }

  if (const auto sweep = root.get_child_optional("sweep")) {
    reject_unknown(*sweep, "sweep", {"models", "max_states"});
    if (auto v = get(root, "sweep", "models")) {
      cfg.sweep.models = to_integer<std::size_t>(*v, "[sweep] models");
    }
    if (auto v = get(root, "sweep", "max_states")) {
      cfg.sweep.max_states = to_integer<std::size_t>(*v, "[sweep] max_states");
      if (cfg.sweep.max_states < 2) {
        throw ConfigError("[sweep] max_states must be at least 2");
      }
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  return parse_config(in);
}

DiscreteModel build_discrete_model(const ModelSpec &spec) {
  if (spec.kind != ModelSpec::Kind::discrete) {
    throw ConfigError("this command needs a discrete model");
  }
  try {
    return make_discrete_model(spec.p, spec.gamma);
  } catch (const ModelError &e) {
    throw ConfigError(std::string("[model] ") + e.what());
  }
}

ContinuousModel build_continuous_model(const ModelSpec &spec) {
  if (spec.kind != ModelSpec::Kind::normal) {
    throw ConfigError("expected a continuous model");
  }
  try {
    return make_normal_model(spec.sigma, spec.proposal, spec.a);
  } catch (const ModelError &e) {
    throw ConfigError(std::string("[model] ") + e.what());
  }
}

} // namespace hastings::lab
