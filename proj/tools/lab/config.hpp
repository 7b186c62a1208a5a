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

#ifndef HASTINGS_LAB_CONFIG_HPP
#define HASTINGS_LAB_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hastings/model.hpp"

namespace hastings::lab {

/// Malformed or inconsistent configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Mode { run, verify, compare, map };

std::optional<Mode> parse_mode(const std::string &text);

struct ModelSpec {
  enum class Kind { discrete, normal };
  Kind kind = Kind::discrete;
  std::vector<double> p;
  std::vector<std::vector<double>> gamma; ///< gamma[x][y] = gamma(y | x)
  ProposalKind proposal = ProposalKind::random_walk;
  double sigma = 1.0;
  double a = 0.5;
};

struct SweepSpec {
  std::size_t models = 0; ///< 0 disables the sweep
  std::size_t max_states = 8;
};

struct ExperimentConfig {
  ModelSpec model;
  double start = 0.0;             ///< initial state (index for discrete models)
  std::vector<std::string> rules; ///< rule specs, e.g. "MH", "M:k=3", "L:k=1"
  std::string source;             ///< parameter spec for map
  std::size_t steps = 1000;
  std::uint64_t seed = 0;
  std::size_t discard = 0;
  std::string out;
  std::optional<Mode> mode;
  SweepSpec sweep;
};

/**
 * Reads an INI document:
 *
 *   [model]  kind = discrete | normal
 *            p = 1 2
 *            gamma = 0.5 0.5 | 0.5 0.5      rows separated by '|'
 *            proposal = random_walk | autoregressive,  sigma = 1,  a = 0.5
 *            start = 0
 *   [rule]   name = MH            or   rules = MH, BK, M:k=1
 *            source = s=1         (map)
 *   [run]    mode, steps, seed, discard, out
 *   [sweep]  models, max_states   (verify)
 *
 * Throws ConfigError naming the section and key on any problem.
 */
ExperimentConfig parse_config(std::istream &in);
ExperimentConfig load_config(const std::string &path);

/// Builds a discrete model from the spec; ModelError is rethrown as ConfigError.
DiscreteModel build_discrete_model(const ModelSpec &spec);
ContinuousModel build_continuous_model(const ModelSpec &spec);

} // namespace hastings::lab

#endif // HASTINGS_LAB_CONFIG_HPP
