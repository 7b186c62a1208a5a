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

// hastings-lab: verify | run | compare | map over an INI experiment config.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "lab/commands.hpp"
#include "lab/config.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> steps;
  std::optional<std::string> out;
  std::optional<std::size_t> discard;
  bool fault_inject = false;
};

void add_flags(CLI::App &cmd, Flags &flags) {
  cmd.add_option("--config", flags.config, "experiment config (INI)")->required();
  cmd.add_option("--seed", flags.seed, "RNG seed, overrides [run] seed");
  cmd.add_option("--steps", flags.steps, "chain length, overrides [run] steps");
  cmd.add_option("--out", flags.out, "output CSV path, default stdout");
  cmd.add_option("--discard", flags.discard, "burn-in steps dropped before recording");
  cmd.add_flag("--fault-inject", flags.fault_inject, "corrupt alpha(1 -> 0) by 1% in verify");
}

} // namespace

int main(int argc, char **argv) {
  using namespace hastings::lab;

  CLI::App app{"Hastings-family MCMC lab: kernels, chains and parameter maps"};
  app.require_subcommand(1);
  Flags flags;
  struct Entry {
    const char *name;
    const char *help;
    Mode mode;
  };
  const Entry entries[] = {
      {"verify", "detailed balance, stationarity and row sums of exact kernels", Mode::verify},
      {"run", "run one chain and write its trajectory", Mode::run},
      {"compare", "pointwise and kernel ordering against MH", Mode::compare},
      {"map", "transform a parameter and check acceptance agreement", Mode::map},
  };
  for (const Entry &e : entries) {
    add_flags(*app.add_subcommand(e.name, e.help), flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  Mode mode = Mode::run;
  for (const Entry &e : entries) {
    if (app.got_subcommand(e.name)) {
      mode = e.mode;
    }
  }

  ExperimentConfig cfg;
  try {
    cfg = load_config(flags.config);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (cfg.mode && *cfg.mode != mode) {
    std::cerr << "config error: config declares a different mode than the subcommand\n";
    return kExitUsage;
  }
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.steps) cfg.steps = *flags.steps;
  if (flags.out) cfg.out = *flags.out;
  if (flags.discard) cfg.discard = *flags.discard;

  return run_command(mode, cfg, CommandOptions{flags.fault_inject}, std::cout, std::cerr);
}
