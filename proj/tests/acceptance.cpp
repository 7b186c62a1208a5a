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

// Acceptance runner: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hastings/hastings.hpp"
#include "lab/commands.hpp"
#include "lab/config.hpp"
#include "support/random_models.hpp"

namespace {

using namespace hastings;
using hastings::fixtures::d2;
using Fn = SymmetricFn<DiscreteState>;
using Rule = AcceptanceRule<DiscreteState>;

constexpr double kTol = 1e-12;

struct Outcome {
  bool passed = true;
  std::string detail;
};

std::string fmt(const char *pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

double binomial_se(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

// ---------------------------------------------------------------------------
// Shared sweep: 100 random models, n <= 8, every rule family
// ---------------------------------------------------------------------------

struct SweepCase {
  DiscreteModel model;
  std::vector<Rule> rules;
  Fn k_between;
};

const std::vector<SweepCase> &sweep() {
  static const std::vector<SweepCase> cases = [] {
    std::mt19937_64 gen(20261016);
    std::uniform_int_distribution<std::size_t> size(2, 8);
    std::uniform_real_distribution<double> cdist(1.0, 3.0);
    std::vector<SweepCase> out;
    for (int trial = 0; trial < 100; ++trial) {
      auto m = hastings::fixtures::random_model(gen, size(gen));
      const Fn between = hastings::fixtures::random_k(gen, m, Regime::between);
      std::vector<Rule> rules = {
          Rule::mh(),
          Rule::bk(),
          Rule::hastings(Fn::constant(Role::s, 1.0)),
          Rule::hastings(s_mh(m)),
          Rule::hastings(s_special(m)),
          Rule::stein(delta_min_product(m)),
          Rule::algorithm_m(hastings::fixtures::random_k(gen, m, Regime::above)),
          Rule::algorithm_m(between),
          Rule::algorithm_m(hastings::fixtures::random_k(gen, m, Regime::below)),
          Rule::mar(Fn::constant(Role::C, 1.0)),
          Rule::mar(C_barker(m)),
          Rule::mar(Fn::constant(Role::C, 2.0)),
          Rule::mir(m_from_C(m, Fn::constant(Role::C, cdist(gen)))),
      };
      out.push_back({std::move(m), std::move(rules), between});
    }
    return out;
  }();
  return cases;
}

Outcome detailed_balance() {
  Outcome o;
  double worst = 0.0;
  std::size_t kernels = 0;
  for (const auto &c : sweep()) {
    for (const auto &rule : c.rules) {
      const auto report = check_detailed_balance(c.model, build_kernel(c.model, rule));
      worst = std::max(worst, report.max_violation / (report.tolerance / kTol));
      ++kernels;
      if (!report.passed) {
        o.passed = false;
        o.detail = rule.label() + " out of balance; ";
      }
    }
  }
  o.detail += std::to_string(kernels) + " kernels" + fmt(", max violation / max p = %.3g", worst);
  return o;
}

Outcome stationarity() {
  Outcome o;
  double worst = 0.0;
  for (const auto &c : sweep()) {
    const auto pi = normalized_target(c.model);
    for (const auto &rule : c.rules) {
      const auto v = stationary_distribution(build_kernel(c.model, rule));
      for (std::size_t i = 0; i < v.size(); ++i) {
        worst = std::max(worst, std::abs(v[i] - pi[i]));
      }
    }
  }
  o.passed = worst <= 1e-10;
  o.detail = fmt("max inf-norm error %.3g", worst);
  return o;
}

// ---------------------------------------------------------------------------
// Equivalence transforms
// ---------------------------------------------------------------------------

struct Draw {
  DiscreteModel model;
  DiscreteState x;
  DiscreteState y;
};

class Sampler {
public:
  explicit Sampler(std::uint64_t seed) : gen_(seed) {}

  Draw next() {
    auto m = hastings::fixtures::random_model(gen_, std::uniform_int_distribution<std::size_t>(2, 8)(gen_));
    std::uniform_int_distribution<std::size_t> s(0, m.space().size() - 1);
    const DiscreteState x = s(gen_);
    const DiscreteState y = s(gen_);
    return {std::move(m), x, y};
  }
  Regime regime() { return static_cast<Regime>(std::uniform_int_distribution<int>(0, 2)(gen_)); }
  bool boundary() { return std::bernoulli_distribution(0.25)(gen_); }
  double scale() { return std::uniform_real_distribution<double>(1.0, 4.0)(gen_); }
  std::mt19937_64 &gen() { return gen_; }

private:
  std::mt19937_64 gen_;
};

// Returns (alpha_before, alpha_after) for one fresh draw.
using Transform = std::function<std::pair<double, double>(Sampler &)>;

struct NamedTransform {
  const char *name;
  Transform run;
};

Fn random_k(Sampler &s, const DiscreteModel &m) {
  return hastings::fixtures::random_k(s.gen(), m, s.regime(), s.boundary());
}

// M at H or m at L exactly a quarter of the time.
Fn random_majorizer(Sampler &s, const Draw &d) {
  const double H = bounds_LH(d.model, d.x, d.y).H;
  return Fn::constant(Role::M, s.boundary() ? H : H * s.scale());
}
Fn random_minorizer(Sampler &s, const Draw &d) {
  const double L = bounds_LH(d.model, d.x, d.y).L;
  return Fn::constant(Role::m, s.boundary() ? L : L / s.scale());
}

std::vector<NamedTransform> transforms() {
  return {
      {"s -> M_s (MAR)",
       [](Sampler &s) {
         const Draw d = s.next();
         const Fn p = hastings::fixtures::random_s(s.gen(), d.model);
         return std::pair{alpha_hastings(d.model, p, d.x, d.y), alpha_mar(d.model, M_from_s(d.model, p), d.x, d.y)};
       }},
      {"s -> M_s (M)",
       [](Sampler &s) {
         const Draw d = s.next();
         const Fn p = hastings::fixtures::random_s(s.gen(), d.model);
         return std::pair{alpha_hastings(d.model, p, d.x, d.y),
                          alpha_m(d.model, M_from_s(d.model, p).with_role(Role::k), d.x, d.y)};
       }},
      {"s -> m_s (MIR)",
       [](Sampler &s) {
         const Draw d = s.next();
         const Fn p = hastings::fixtures::random_s(s.gen(), d.model);
         return std::pair{alpha_hastings(d.model, p, d.x, d.y), alpha_mir(d.model, m_from_s(d.model, p), d.x, d.y)};
       }},
      {"s -> m_s (M)",
       [](Sampler &s) {
         const Draw d = s.next();
         const Fn p = hastings::fixtures::random_s(s.gen(), d.model);
         return std::pair{alpha_hastings(d.model, p, d.x, d.y),
                          alpha_m(d.model, m_from_s(d.model, p).with_role(Role::k), d.x, d.y)};
       }},
      {"M -> s_M",
       [](Sampler &s) {
         const Draw d = s.next();
         const Fn M = random_majorizer(s, d);
         return std::pair{alpha_mar(d.model, M, d.x, d.y), alpha_hastings(d.model, s_from_M(d.model, M), d.x, d.y)};
       }},
      {"m -> s_m",
       [](Sampler &s) {
         const Draw d = s.next();
         const Fn m = random_minorizer(s, d);
         return std::pair{alpha_mir(d.model, m, d.x, d.y), alpha_hastings(d.model, s_from_m(d.model, m), d.x, d.y)};
       }},
      {"k -> s_k",
       [](Sampler &s) {
         const Draw d = s.next();
         const Fn k = random_k(s, d.model);
         return std::pair{alpha_m(d.model, k, d.x, d.y), alpha_hastings(d.model, s_from_k(d.model, k), d.x, d.y)};
       }},
      {"k -> delta_k",
       [](Sampler &s) {
         const Draw d = s.next();
         const Fn k = random_k(s, d.model);
         return std::pair{alpha_m(d.model, k, d.x, d.y), alpha_stein(d.model, delta_from_k(d.model, k), d.x, d.y)};
       }},
      {"k -> M_k",
       [](Sampler &s) {
         const Draw d = s.next();
         const Fn k = random_k(s, d.model);
         return std::pair{alpha_m(d.model, k, d.x, d.y), alpha_mar(d.model, M_from_k(d.model, k), d.x, d.y)};
       }},
      {"k -> m_k",
       [](Sampler &s) {
         const Draw d = s.next();
         const Fn k = random_k(s, d.model);
         return std::pair{alpha_m(d.model, k, d.x, d.y), alpha_mir(d.model, m_from_k(d.model, k), d.x, d.y)};
       }},
      {"delta -> M_delta",
       [](Sampler &s) {
         const Draw d = s.next();
         const Fn delta = hastings::fixtures::random_delta(s.gen(), d.model);
         return std::pair{alpha_stein(d.model, delta, d.x, d.y),
                          alpha_mar(d.model, M_from_delta(d.model, delta), d.x, d.y)};
       }},
      {"delta -> m_delta",
       [](Sampler &s) {
         const Draw d = s.next();
         const Fn delta = hastings::fixtures::random_delta(s.gen(), d.model);
         return std::pair{alpha_stein(d.model, delta, d.x, d.y),
                          alpha_mir(d.model, m_from_delta(d.model, delta), d.x, d.y)};
       }},
      {"C -> C*H",
       [](Sampler &s) {
         const Draw d = s.next();
         const Fn C = hastings::fixtures::random_C(s.gen(), d.model.space().size());
         return std::pair{alpha_mar(d.model, C, d.x, d.y),
                          alpha_m(d.model, M_from_C(d.model, C).with_role(Role::k), d.x, d.y)};
       }},
      {"C -> L/C",
       [](Sampler &s) {
         const Draw d = s.next();
         const Fn C = hastings::fixtures::random_C(s.gen(), d.model.space().size());
         const Fn m = m_from_C(d.model, C);
         return std::pair{alpha_mir(d.model, m, d.x, d.y), alpha_m(d.model, m.with_role(Role::k), d.x, d.y)};
       }},
  };
}

Outcome equivalence_transforms() {
  Outcome o;
  double worst = 0.0;
  std::uint64_t seed = 300;
  const auto all = transforms();
  for (const auto &t : all) {
    Sampler s(seed++);
    for (int draw = 0; draw < 10000; ++draw) {
      const auto [before, after] = t.run(s);
      const double diff = std::abs(before - after);
      worst = std::max(worst, diff);
      if (!(diff <= kTol)) {
        o.passed = false;
        o.detail = std::string(t.name) + fmt(" differs by %.3g; ", diff);
        break;
      }
    }
  }
  o.detail += std::to_string(all.size()) + " transforms x 10000 draws" + fmt(", max |diff| %.3g", worst);
  return o;
}

// ---------------------------------------------------------------------------
// MH maximality
// ---------------------------------------------------------------------------

Outcome mh_maximality() {
  Outcome o;
  std::size_t pairs = 0;
  std::size_t interior = 0;
  auto fail = [&](const std::string &what) {
    if (o.passed) {
      o.detail = what + "; ";
    }
    o.passed = false;
  };
  for (const auto &c : sweep()) {
    const auto &m = c.model;
    const auto Pmh = build_kernel(m, Rule::mh());
    for (const auto &rule : c.rules) {
      for (const auto &[x, y] : all_ordered_pairs(m)) {
        ++pairs;
        if (rule.alpha(m, x, y) > alpha_mh(m, x, y) + kTol) {
          fail(rule.label() + " exceeds MH");
        }
      }
      if (!kernel_dominates(Pmh, build_kernel(m, rule))) {
        fail(rule.label() + " kernel exceeds MH");
      }
    }
    for (const auto &[x, y] : all_ordered_pairs(m)) {
      const Bounds b = bounds_LH(m, x, y);
      const double k = c.k_between(x, y);
      if (b.L < k && k < b.H) {
        ++interior;
        if (std::abs(alpha_m(m, c.k_between, x, y) - alpha_mh(m, x, y)) > kTol) {
          fail("interior k differs from MH");
        }
      }
    }
  }
  // Random draws of interior k, independent of the sweep.
  Sampler s(77);
  for (int draw = 0; draw < 10000; ++draw) {
    const Draw d = s.next();
    const Bounds b = bounds_LH(d.model, d.x, d.y);
    const Fn k = hastings::fixtures::random_k(s.gen(), d.model, Regime::between);
    if (b.L < k(d.x, d.y) && k(d.x, d.y) < b.H) {
      ++interior;
      if (std::abs(alpha_m(d.model, k, d.x, d.y) - alpha_mh(d.model, d.x, d.y)) > kTol) {
        fail("interior k differs from MH");
      }
    }
  }
  o.detail += std::to_string(pairs) + " rule-pairs, " + std::to_string(interior) + " interior equalities";
  return o;
}

Outcome piecewise_identity() {
  Outcome o;
  Sampler s(5);
  std::size_t by_regime[3] = {0, 0, 0};
  double worst = 0.0;
  for (int draw = 0; draw < 10000; ++draw) {
    const Draw d = s.next();
    const Fn k = random_k(s, d.model);
    ++by_regime[static_cast<int>(piecewise_regime(d.model, k, d.x, d.y))];
    worst = std::max(worst, std::abs(alpha_m(d.model, k, d.x, d.y) - alpha_m_piecewise(d.model, k, d.x, d.y)));
  }
  o.passed = worst <= kTol && by_regime[0] > 0 && by_regime[1] > 0 && by_regime[2] > 0;
  o.detail = "regimes above/between/below " + std::to_string(by_regime[0]) + "/" + std::to_string(by_regime[1]) +
             "/" + std::to_string(by_regime[2]) + fmt(", max |diff| %.3g", worst);
  return o;
}

// ---------------------------------------------------------------------------
// Two-stage accounting
// ---------------------------------------------------------------------------

Outcome two_stage_accounting() {
  Outcome o;
  const auto m = d2();
  const int n = 100000;
  double worst_z = 0.0;
  RngStream rng(6);
  for (double kv : {1.0, 3.0, 6.0}) {
    const Fn k = Fn::constant(Role::k, kv);
    for (const auto &[x, y] : all_ordered_pairs(m)) {
      std::size_t accepted = 0;
      std::size_t type_x = 0;
      std::size_t type_y = 0;
      for (int i = 0; i < n; ++i) {
        const auto out = two_stage_test(m, k, x, y, rng);
        accepted += out.accepted ? 1 : 0;
        type_x += out.duplication == Duplication::type_x ? 1 : 0;
        type_y += out.duplication == Duplication::type_y ? 1 : 0;
      }
      const double a = alpha_m(m, k, x, y);
      const double se = binomial_se(a, n);
      const double err = std::abs(static_cast<double>(accepted) / n - a);
      if (se > 0.0) {
        worst_z = std::max(worst_z, err / se);
      }
      const Bounds b = bounds_LH(m, x, y);
      const bool above = kv >= b.H;
      const bool below = kv <= b.L;
      // A pair that always accepts has no rejection channel to account for.
      const bool channels = a == 1.0 ? type_x == 0 && type_y == 0 : (type_x == 0) == above && (type_y == 0) == below;
      const bool ok = (se > 0.0 ? err <= 3.0 * se : err == 0.0) && channels &&
                      accepted + type_x + type_y == std::size_t(n);
      if (!ok) {
        o.passed = false;
        o.detail += "k=" + std::to_string(int(kv)) + " pair (" + std::to_string(x) + "," + std::to_string(y) +
                    ") typex=" + std::to_string(type_x) + " typey=" + std::to_string(type_y) + "; ";
      }
    }
  }
  o.detail += fmt("max |z| %.2f over 3 k x 4 pairs x 1e5 trials", worst_z);
  return o;
}

// ---------------------------------------------------------------------------
// Chain correctness
// ---------------------------------------------------------------------------

struct ChainCase {
  std::string label;
  TransitionMatrix kernel;
  std::function<ChainRun<DiscreteState>(RngStream &)> run;
};

std::vector<ChainCase> chain_cases(const DiscreteModel &m, std::mt19937_64 &gen, std::size_t steps) {
  std::vector<Rule> rules = {
      Rule::mh(),
      Rule::bk(),
      Rule::special(),
      Rule::hastings(Fn::constant(Role::s, 1.0)),
      Rule::stein(delta_min_product(m)),
      Rule::algorithm_m(hastings::fixtures::random_k(gen, m, Regime::above)),
      Rule::algorithm_m(hastings::fixtures::random_k(gen, m, Regime::below)),
      Rule::mar(Fn::constant(Role::C, 2.0)),
      Rule::mir(m_from_C(m, Fn::constant(Role::C, 2.0))),
  };
  std::vector<ChainCase> out;
  for (auto &rule : rules) {
    out.push_back({rule.label(), build_kernel(m, rule), [m, rule, steps](RngStream &rng) {
                     return run_chain(m, rule, DiscreteState{0}, steps, rng);
                   }});
  }
  const Fn k = hastings::fixtures::random_mixed_k(gen, m);
  out.push_back({"L(" + k.description() + ")", build_kernel_L(m, k),
                 [m, k, steps](RngStream &rng) { return run_chain_L(m, k, DiscreteState{0}, steps, rng); }});
  return out;
}

Outcome chain_correctness() {
  Outcome o;
  const std::size_t steps = 1'000'000;
  std::mt19937_64 gen(7);
  const std::vector<std::pair<std::string, DiscreteModel>> models = {
      {"D2", d2()}, {"random5", hastings::fixtures::random_model(gen, 5)}};
  std::size_t chains = 0;
  double min_p = 1.0;
  std::uint64_t stream = 0;
  for (const auto &[name, m] : models) {
    const auto pi = normalized_target(m);
    for (const auto &c : chain_cases(m, gen, steps)) {
      RngStream rng(2026, stream++);
      const auto run = c.run(rng);
      const auto test =
          chi_square_stationarity(state_counts(run, pi.size()), pi, asymptotic_covariance(c.kernel, pi), 0.001);
      ++chains;
      min_p = std::min(min_p, test.p_value);
      if (!test.passed) {
        o.passed = false;
        o.detail += name + "/" + c.label + fmt(" chi2 %.3g > %.3g; ", test.statistic, test.critical);
      }
    }
  }
  for (ProposalKind kind : {ProposalKind::random_walk, ProposalKind::autoregressive}) {
    const auto m = make_normal_model(1.0, kind, 0.5);
    RngStream rng(2026, stream++);
    const auto run = run_chain(m, AcceptanceRule<double>::mh(), 0.0, steps, rng);
    std::vector<double> xs(run.states.begin() + 1, run.states.end());
    const auto mean = batch_means(xs);
    std::vector<double> centred;
    centred.reserve(xs.size());
    for (double v : xs) {
      centred.push_back((v - mean.mean) * (v - mean.mean));
    }
    const auto var = batch_means(centred);
    const char *label = kind == ProposalKind::random_walk ? "normal/RW" : "normal/AR";
    if (std::abs(mean.mean) > 3.0 * mean.standard_error || std::abs(var.mean - 1.0) > 3.0 * var.standard_error) {
      o.passed = false;
      o.detail += std::string(label) + fmt(" mean %.4g var %.4g; ", mean.mean, var.mean);
    }
    o.detail += std::string(label) +
                fmt(" z(mean) %.2f", mean.mean / mean.standard_error) +
                fmt(" z(var) %.2f; ", (var.mean - 1.0) / var.standard_error);
  }
  o.detail += std::to_string(chains) + " discrete chains of 1e6" + fmt(", min p-value %.3g", min_p);
  return o;
}

// ---------------------------------------------------------------------------
// AR / IMAR coupling and determinism
// ---------------------------------------------------------------------------

Outcome ar_imar_coupling() {
  Outcome o;
  std::mt19937_64 gen(8);
  const std::vector<DiscreteModel> models = {d2(), hastings::fixtures::random_independent_model(gen, 6)};
  std::uint64_t seed = 80;
  for (const auto &m : models) {
    double M = 0.0;
    for (DiscreteState z = 0; z < m.space().size(); ++z) {
      M = std::max(M, std::exp(m.log_p(z) - m.log_gamma(z, z)));
    }
    const IndependentMajorizer<DiscreteState> ar(m, 1.25 * M);
    RngStream shared(seed);
    RngStream replay(seed++);
    std::vector<DiscreteState> ar_out;
    std::vector<DiscreteState> imar_out;
    while (ar_out.size() < 10000) {
      ar_out.push_back(ar.ar_sample(shared).value);
    }
    DiscreteState x = 0;
    while (imar_out.size() < 10000) {
      const auto out = ar.step_imar(x, replay);
      if (out.accepted) {
        imar_out.push_back(out.next);
      }
      x = out.next;
    }
    if (ar_out != imar_out || shared.draws() != replay.draws()) {
      o.passed = false;
      o.detail += "n=" + std::to_string(m.space().size()) + " sequences differ; ";
    }
  }
  o.detail += "2 models x 10000 acceptances";
  return o;
}

Outcome determinism() {
  Outcome o;
  std::size_t bytes = 0;
  for (const char *name : {"d2_mh.ini", "d2_two_stage.ini", "normal_autoregressive.ini", "five_state.ini"}) {
    auto cfg = lab::load_config(std::string(HASTINGS_CONFIG_DIR) + "/" + name);
    cfg.steps = 20000;
    if (cfg.rules.size() > 1) {
      cfg.rules.resize(1);
    }
    std::ostringstream first;
    std::ostringstream second;
    const int a = lab::cmd_run(cfg, first);
    const int b = lab::cmd_run(cfg, second);
    bytes += first.str().size();
    if (a != 0 || b != 0 || first.str() != second.str() || first.str().empty()) {
      o.passed = false;
      o.detail += std::string(name) + " differs; ";
    }
  }
  o.detail += "4 configs, " + std::to_string(bytes) + " bytes each side";
  return o;
}

struct Criterion {
  int id;
  const char *name;
  Outcome (*check)();
  double budget_seconds; // 0 means no limit
};

} // namespace

int main() {
  const Criterion criteria[] = {
      {1, "detailed balance", detailed_balance, 10.0},
      {2, "stationarity", stationarity, 0.0},
      {3, "equivalence transforms", equivalence_transforms, 0.0},
      {4, "MH maximality", mh_maximality, 0.0},
      {5, "piecewise identity", piecewise_identity, 0.0},
      {6, "two-stage accounting", two_stage_accounting, 5.0},
      {7, "chain correctness", chain_correctness, 60.0},
      {8, "AR/IMAR coupling", ar_imar_coupling, 0.0},
      {9, "determinism", determinism, 0.0},
  };
  // The sweep models are built once, outside any timed criterion.
  sweep();
  int failures = 0;
  for (const auto &c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      out = c.check();
    } catch (const std::exception &e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.budget_seconds == 0.0 || seconds < c.budget_seconds;
    const bool passed = out.passed && in_time;
    failures += passed ? 0 : 1;
    std::printf("criterion %d %s: %s (%.2f s%s) %s%s\n", c.id, c.name, passed ? "PASS" : "FAIL", seconds,
                c.budget_seconds == 0.0 ? "" : fmt(", limit %.0f s", c.budget_seconds).c_str(),
                out.detail.c_str(), in_time ? "" : " [over time limit]");
    std::fflush(stdout);
  }
  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
