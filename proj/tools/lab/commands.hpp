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

#ifndef HASTINGS_LAB_COMMANDS_HPP
#define HASTINGS_LAB_COMMANDS_HPP

#include <cstddef>
#include <ostream>

#include "lab/config.hpp"

namespace hastings::lab {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct CommandOptions {
  /// Multiplies alpha(1 -> 0) by 1.01 inside verify.
  bool fault_inject = false;
};

/// Worker count for sweeps: HASTINGS_LAB_THREADS if set, else the hardware count.
std::size_t worker_threads();

/// Each writes CSV to `out` and returns an exit code; they may throw.
int cmd_verify(const ExperimentConfig &cfg, const CommandOptions &options, std::ostream &out);
int cmd_run(const ExperimentConfig &cfg, std::ostream &out);
int cmd_compare(const ExperimentConfig &cfg, std::ostream &out);
int cmd_map(const ExperimentConfig &cfg, std::ostream &out);

/**
 * Runs `mode`, writing to cfg.out when set and to `out` otherwise. Exceptions
 * become exit codes: configuration problems 2, library errors 1, each with a
 * message on `err`.
 */
int run_command(Mode mode, const ExperimentConfig &cfg, const CommandOptions &options,
                std::ostream &out, std::ostream &err);

} // namespace hastings::lab

#endif // HASTINGS_LAB_COMMANDS_HPP
