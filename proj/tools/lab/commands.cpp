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

#include "lab/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hastings/hastings.hpp"
#include "lab/catalog.hpp"

namespace hastings::lab {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

const char *flag(bool b) { return b ? "true" : "false"; }

void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body) {
  const std::size_t workers = std::min(worker_threads(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      body(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            const std::lock_guard lock(failure_mutex);
            if (!failure) {
              failure = std::current_exception();
            }
          }
        }
      });
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

DiscreteState discrete_start(const ExperimentConfig &cfg, const DiscreteModel &model) {
  const double s = cfg.start;
  if (!(s >= 0.0) || s != std::floor(s) || s >= static_cast<double>(model.space().size())) {
    throw ConfigError("[model] start must be a state index in {0, ..., " +
                      std::to_string(model.space().size() - 1) + "}");
  }
  return static_cast<DiscreteState>(s);
}

std::vector<RuleSpec> configured_rules(const ExperimentConfig &cfg) {
  std::vector<RuleSpec> specs;
  for (const std::string &text : cfg.rules) {
    specs.push_back(parse_rule(text));
  }
  return specs;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct KernelChecks {
  std::vector<std::string> rows;
  bool passed = true;
};

template <class AlphaFn>
KernelChecks check_kernel(const DiscreteModel &model, const std::string &label, AlphaFn &&alpha) {
  KernelChecks out;
  const TransitionMatrix P = build_kernel(model, alpha);
  const BalanceReport balance = check_detailed_balance(model, P);
  const std::string worst = balance.max_violation > 0.0
                                ? "pair=(" + std::to_string(balance.worst_pair.first) + " " +
                                      std::to_string(balance.worst_pair.second) + ")"
                                : "";
  out.rows.push_back("detailed_balance," + label + "," + num(balance.max_violation) + "," +
                     num(balance.tolerance) + "," + flag(balance.passed) + "," + worst);

  constexpr double kStationaryTol = 1e-10;
  const std::vector<double> pi = normalized_target(model);
  double error = 0.0;
  std::string detail;
  try {
    const std::vector<double> v = stationary_distribution(P);
    for (std::size_t i = 0; i < v.size(); ++i) {
      error = std::max(error, std::abs(v[i] - pi[i]));
    }
  } catch (const ConvergenceError &e) {
    error = std::numeric_limits<double>::quiet_NaN();
    detail = "no fixed point";
  }
  const bool stationary_ok = error <= kStationaryTol;
  out.rows.push_back("stationary_error," + label + "," + num(error) + "," + num(kStationaryTol) + "," +
                     flag(stationary_ok) + "," + detail);

  const double row_error = max_row_sum_error(P);
  const bool rows_ok = row_error <= kRowSumTol;
  out.rows.push_back("row_sum_error," + label + "," + num(row_error) + "," + num(kRowSumTol) + "," +
                     flag(rows_ok) + ",");
  out.passed = balance.passed && stationary_ok && rows_ok;
  return out;
}

DiscreteModel random_sweep_model(RngStream &rng, std::size_t max_states) {
  const std::size_t n = 2 + std::min(static_cast<std::size_t>(rng.uniform() * static_cast<double>(max_states - 1)),
                                     max_states - 2);
  std::vector<double> p(n);
  for (double &v : p) {
    v = 0.05 + 4.95 * rng.uniform();
  }
  std::vector<std::vector<double>> gamma(n, std::vector<double>(n));
  for (auto &row : gamma) {
    double total = 0.0;
    for (double &v : row) {
      v = 0.05 + 0.95 * rng.uniform();
      total += v;
    }
    for (double &v : row) {
      v /= total;
    }
  }
  return make_discrete_model(p, gamma);
}

} // namespace

std::size_t worker_threads() {
  if (const char *env = std::getenv("HASTINGS_LAB_THREADS"); env != nullptr && *env != '\0') {
    char *end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) {
      throw ConfigError("HASTINGS_LAB_THREADS must be a positive integer, got '" + std::string(env) + "'");
    }
    return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_verify(const ExperimentConfig &cfg, const CommandOptions &options, std::ostream &out) {
  out << "check,rule,value,threshold,passed,detail\n";
  bool all_passed = true;

  if (cfg.sweep.models > 0) {
    std::vector<KernelChecks> results(cfg.sweep.models);
    parallel_for(cfg.sweep.models, [&](std::size_t i) {
      RngStream rng(cfg.seed, i);
      const DiscreteModel model = random_sweep_model(rng, cfg.sweep.max_states);
      const std::string prefix = "model" + std::to_string(i) + "/n" + std::to_string(model.space().size()) + "/";
      for (const auto &rule : sweep_rules(model)) {
        KernelChecks c = check_kernel(model, prefix + rule.label(), [&](std::size_t x, std::size_t y) {
          return rule.alpha(model, x, y);
        });
        results[i].passed = results[i].passed && c.passed;
        results[i].rows.insert(results[i].rows.end(), c.rows.begin(), c.rows.end());
      }
    });
    for (const KernelChecks &r : results) {
      for (const std::string &row : r.rows) {
        out << row << '\n';
      }
      all_passed = all_passed && r.passed;
    }
    return all_passed ? kExitPass : kExitFailure;
  }

  const DiscreteModel model = build_discrete_model(cfg.model);
  std::vector<RuleSpec> specs = configured_rules(cfg);
  if (specs.empty()) {
    specs.push_back(parse_rule("MH"));
  }
  for (const RuleSpec &spec : specs) {
    const auto rule = ConfiguredRule<DiscreteState>::make(spec, model);
    const KernelChecks c = check_kernel(model, rule.label(), [&](std::size_t x, std::size_t y) {
      const double a = rule.alpha(model, x, y);
      return options.fault_inject && x == 1 && y == 0 ? a * 1.01 : a;
    });
    for (const std::string &row : c.rows) {
      out << row << '\n';
    }
    all_passed = all_passed && c.passed;
  }
  return all_passed ? kExitPass : kExitFailure;
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

namespace {

template <class State>
struct RunFooter {
  std::size_t accepted = 0;
  std::size_t type_x = 0;
  std::size_t type_y = 0;
};

template <class State>
RunFooter<State> write_trajectory(const ChainRun<State> &run, std::size_t discard, std::ostream &out) {
  RunFooter<State> footer;
  const std::size_t total = run.outcomes.size();
  for (std::size_t i = discard; i < total; ++i) {
    const Duplication d = run.outcomes[i];
    const bool accepted = d == Duplication::none;
    footer.accepted += accepted ? 1 : 0;
    footer.type_x += d == Duplication::type_x ? 1 : 0;
    footer.type_y += d == Duplication::type_y ? 1 : 0;
    out << (i - discard + 1) << ',' << num(static_cast<double>(run.states[i + 1])) << ','
        << (accepted ? 1 : 0) << ',' << to_string(d) << '\n';
  }
  return footer;
}

std::string batch_variance_text(const std::vector<double> &series) {
  if (series.size() < 4) {
    return "n/a";
  }
  return num(batch_means(series).asymptotic_variance);
}

template <class State>
void write_common_footer(const ChainRun<State> &run, const RunFooter<State> &footer, std::size_t steps,
                         const std::vector<double> &series, std::ostream &out) {
  const double n = static_cast<double>(steps);
  out << "# acceptance_rate," << num(static_cast<double>(footer.accepted) / n) << '\n';
  if (run.typex_dup) {
    out << "# typex_rate," << num(static_cast<double>(footer.type_x) / n) << '\n';
    out << "# typey_rate," << num(static_cast<double>(footer.type_y) / n) << '\n';
  } else {
    out << "# typex_rate,n/a\n# typey_rate,n/a\n";
  }
  out << "# batch_means_variance," << batch_variance_text(series) << '\n';
}

} // namespace

int cmd_run(const ExperimentConfig &cfg, std::ostream &out) {
  const std::vector<RuleSpec> specs = configured_rules(cfg);
  if (specs.size() != 1) {
    throw ConfigError("run needs exactly one rule in [rule] name");
  }
  if (cfg.steps < 1) {
    throw ConfigError("[run] steps must be at least 1");
  }
  const std::size_t total = cfg.steps + cfg.discard;
  RngStream rng(cfg.seed);
  out << "step,state,accepted,duplication_type\n";

  if (cfg.model.kind == ModelSpec::Kind::discrete) {
    const DiscreteModel model = build_discrete_model(cfg.model);
    const auto rule = ConfiguredRule<DiscreteState>::make(specs.front(), model);
    const auto run = rule.run(model, discrete_start(cfg, model), total, rng);
    const auto footer = write_trajectory(run, cfg.discard, out);
    std::vector<double> series(run.states.begin() + static_cast<std::ptrdiff_t>(cfg.discard + 1), run.states.end());
    write_common_footer(run, footer, cfg.steps, series, out);
    out << "# expected_acceptance_rate,"
        << num(expected_acceptance(model, [&](std::size_t x, std::size_t y) { return rule.alpha(model, x, y); }))
        << '\n';
    const std::size_t n = model.space().size();
    std::vector<std::size_t> counts(n, 0);
    for (double s : series) {
      ++counts[static_cast<std::size_t>(s)];
    }
    for (std::size_t i = 0; i < n; ++i) {
      out << "# freq_" << i << ',' << num(static_cast<double>(counts[i]) / static_cast<double>(cfg.steps)) << '\n';
    }
    return kExitPass;
  }

  const ContinuousModel model = build_continuous_model(cfg.model);
  const auto rule = ConfiguredRule<double>::make(specs.front(), model);
  const auto run = rule.run(model, cfg.start, total, rng);
  const auto footer = write_trajectory(run, cfg.discard, out);
  std::vector<double> series(run.states.begin() + static_cast<std::ptrdiff_t>(cfg.discard + 1), run.states.end());
  write_common_footer(run, footer, cfg.steps, series, out);

  const double n = static_cast<double>(series.size());
  double mean = 0.0;
  for (double v : series) {
    mean += v;
  }
  mean /= n;
  std::vector<double> squares;
  squares.reserve(series.size());
  for (double v : series) {
    squares.push_back((v - mean) * (v - mean));
  }
  double variance = 0.0;
  for (double v : squares) {
    variance += v;
  }
  variance /= n;
  out << "# mean," << num(mean) << '\n';
  out << "# mean_se," << (series.size() < 4 ? "n/a" : num(batch_means(series).standard_error)) << '\n';
  out << "# variance," << num(variance) << '\n';
  out << "# variance_se," << (squares.size() < 4 ? "n/a" : num(batch_means(squares).standard_error)) << '\n';
  return kExitPass;
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

int cmd_compare(const ExperimentConfig &cfg, std::ostream &out) {
  const DiscreteModel model = build_discrete_model(cfg.model);
  const std::vector<RuleSpec> specs = configured_rules(cfg);
  if (specs.empty()) {
    throw ConfigError("compare needs at least one rule in [rule] rules");
  }
  std::vector<AcceptanceRule<DiscreteState>> rules;
  for (const RuleSpec &spec : specs) {
    const auto configured = ConfiguredRule<DiscreteState>::make(spec, model);
    // The two-stage algorithm has the kernel of M with the same k.
    rules.push_back(configured.two_stage() ? AcceptanceRule<DiscreteState>::algorithm_m(*configured.k())
                                           : *configured.rule());
  }

  const auto mh = AcceptanceRule<DiscreteState>::mh();
  ComparisonOptions options;
  options.steps = cfg.steps;
  options.seed = cfg.seed;
  options.indicator_state = discrete_start(cfg, model);
  options.estimate_variance = cfg.steps >= 4;
  std::vector<std::optional<RuleComparison>> results(rules.size());
  parallel_for(rules.size(), [&](std::size_t i) { results[i] = compare_rules(model, mh, rules[i], options); });

  out << "rule,x,y,alpha,alpha_mh,kernel,kernel_mh,alpha_le_mh,kernel_le_mh\n";
  bool dominates = true;
  for (const auto &r : results) {
    for (const PairComparison &pc : r->pairs) {
      out << r->label_b << ',' << pc.x << ',' << pc.y << ',' << num(pc.alpha_b) << ',' << num(pc.alpha_a) << ','
          << num(pc.kernel_b) << ',' << num(pc.kernel_a) << ',' << flag(pc.alpha_b <= pc.alpha_a + kIdentityTol)
          << ',' << flag(pc.kernel_b <= pc.kernel_a + kIdentityTol) << '\n';
    }
    dominates = dominates && r->alpha_a_dominates && r->kernel_a_dominates;
  }
  out << "# indicator_state," << options.indicator_state << '\n';
  out << "# variance,MH(reference),exact," << num(results.front()->exact_variance_a);
  if (results.front()->estimate_a) {
    out << ",batch_means," << num(results.front()->estimate_a->asymptotic_variance);
  }
  out << '\n';
  for (const auto &r : results) {
    out << "# variance," << r->label_b << ",exact," << num(r->exact_variance_b);
    if (r->estimate_b) {
      out << ",batch_means," << num(r->estimate_b->asymptotic_variance);
    }
    out << '\n';
  }
  out << "# MH >= all: " << flag(dominates) << '\n';
  return dominates ? kExitPass : kExitFailure;
}

// ---------------------------------------------------------------------------
// map
// ---------------------------------------------------------------------------

namespace {

using DFn = SymmetricFn<DiscreteState>;
using AlphaOf = std::function<double(DiscreteState, DiscreteState)>;

struct Transform {
  std::string name;
  DFn result;
  AlphaOf alpha;
};

struct MapPlan {
  AlphaOf before;
  std::vector<Transform> transforms;
};

MapPlan plan_map(const DiscreteModel &model, const DFn &src) {
  const DiscreteModel &m = model;
  auto via_m = [&m](const DFn &f) {
    const DFn k = f.with_role(Role::k);
    return AlphaOf([&m, k](DiscreteState x, DiscreteState y) { return alpha_m(m, k, x, y); });
  };
  auto via_mar = [&m](const DFn &f) {
    return AlphaOf([&m, f](DiscreteState x, DiscreteState y) { return alpha_mar(m, f, x, y); });
  };
  auto via_mir = [&m](const DFn &f) {
    return AlphaOf([&m, f](DiscreteState x, DiscreteState y) { return alpha_mir(m, f, x, y); });
  };
  auto via_ha = [&m](const DFn &f) {
    return AlphaOf([&m, f](DiscreteState x, DiscreteState y) { return alpha_hastings(m, f, x, y); });
  };
  auto via_st = [&m](const DFn &f) {
    return AlphaOf([&m, f](DiscreteState x, DiscreteState y) { return alpha_stein(m, f, x, y); });
  };

  MapPlan plan;
  switch (src.role()) {
  case Role::s: {
    plan.before = via_ha(src);
    const DFn Ms = M_from_s(model, src);
    const DFn ms = m_from_s(model, src);
    plan.transforms = {{"M_s:M", Ms, via_m(Ms)},
                       {"m_s:M", ms, via_m(ms)},
                       {"M_s:MAR", Ms, via_mar(Ms)},
                       {"m_s:MIR", ms, via_mir(ms)},
                       {"s_M:HA", s_from_M(model, Ms), via_ha(s_from_M(model, Ms))}};
    break;
  }
  case Role::k: {
    plan.before = via_m(src);
    const DFn s = s_from_k(model, src);
    const DFn d = delta_from_k(model, src);
    const DFn Mk = M_from_k(model, src);
    const DFn mk = m_from_k(model, src);
    plan.transforms = {{"s_k:HA", s, via_ha(s)},     {"delta_k:ST", d, via_st(d)},
                       {"M_k:MAR", Mk, via_mar(Mk)}, {"m_k:MIR", mk, via_mir(mk)},
                       {"M_k:M", Mk, via_m(Mk)},     {"m_k:M", mk, via_m(mk)}};
    break;
  }
  case Role::delta: {
    plan.before = via_st(src);
    const DFn Md = M_from_delta(model, src);
    const DFn md = m_from_delta(model, src);
    plan.transforms = {{"M_delta:MAR", Md, via_mar(Md)},
                       {"m_delta:MIR", md, via_mir(md)},
                       {"M_delta:M", Md, via_m(Md)},
                       {"m_delta:M", md, via_m(md)}};
    break;
  }
  case Role::M: {
    plan.before = via_mar(src);
    const DFn s = s_from_M(model, src);
    plan.transforms = {{"s_M:HA", s, via_ha(s)}, {"M:M", src, via_m(src)}};
    break;
  }
  case Role::m: {
    plan.before = via_mir(src);
    const DFn s = s_from_m(model, src);
    plan.transforms = {{"s_m:HA", s, via_ha(s)}, {"m:M", src, via_m(src)}};
    break;
  }
  case Role::C: {
    plan.before = via_mar(src);
    const DFn M = M_from_C(model, src);
    const DFn mC = m_from_C(model, src);
    plan.transforms = {{"C*H:MAR", M, via_mar(M)}, {"C*H:M", M, via_m(M)}, {"L/C:MIR", mC, via_mir(mC)}};
    break;
  }
  }
  return plan;
}

} // namespace

int cmd_map(const ExperimentConfig &cfg, std::ostream &out) {
  const DiscreteModel model = build_discrete_model(cfg.model);
  if (cfg.source.empty()) {
    throw ConfigError("map needs [rule] source");
  }
  const DFn src = build_param(parse_param(cfg.source), model);
  out << "x,y,transform,source_value,result_value,alpha_before,alpha_after,abs_diff\n";

  const auto report = validate_symmetric_fn(model, src, all_ordered_pairs(model));
  if (!report.clean()) {
    for (const auto &f : report.findings) {
      out << f.x << ',' << f.y << ",violation:" << to_string(f.kind) << ',' << num(f.value) << ','
          << num(f.magnitude) << ",,,\n";
    }
    out << "# violations," << report.findings.size() << '\n';
    return kExitFailure;
  }

  const MapPlan plan = plan_map(model, src);
  double worst = 0.0;
  std::size_t violations = 0;
  for (const auto &[x, y] : all_ordered_pairs(model)) {
    for (const Transform &t : plan.transforms) {
      try {
        const double before = plan.before(x, y);
        const double after = t.alpha(x, y);
        const double diff = std::abs(before - after);
        worst = std::max(worst, diff);
        out << x << ',' << y << ',' << t.name << ',' << num(src(x, y)) << ',' << num(t.result(x, y)) << ','
            << num(before) << ',' << num(after) << ',' << num(diff) << '\n';
      } catch (const ConditionViolation &e) {
        ++violations;
        out << x << ',' << y << ",violation:" << t.name << ",,,,,\n";
      }
    }
  }
  out << "# transforms," << plan.transforms.size() << '\n';
  out << "# max_abs_diff," << num(worst) << '\n';
  const bool ok = violations == 0 && worst <= kIdentityTol;
  return ok ? kExitPass : kExitFailure;
}

int run_command(Mode mode, const ExperimentConfig &cfg, const CommandOptions &options, std::ostream &out,
                std::ostream &err) {
  try {
    std::ofstream file;
    std::ostream *sink = &out;
    if (!cfg.out.empty()) {
      file.open(cfg.out, std::ios::binary | std::ios::trunc);
      if (!file) {
        throw ConfigError("cannot open output file '" + cfg.out + "'");
      }
      sink = &file;
    }
    switch (mode) {
    case Mode::verify: return cmd_verify(cfg, options, *sink);
    case Mode::run: return cmd_run(cfg, *sink);
    case Mode::compare: return cmd_compare(cfg, *sink);
    case Mode::map: return cmd_map(cfg, *sink);
    }
    return kExitUsage;
  } catch (const ConfigError &e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RoleMismatch &e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

} // namespace hastings::lab
