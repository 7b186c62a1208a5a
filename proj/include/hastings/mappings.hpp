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

#ifndef HASTINGS_MAPPINGS_HPP
#define HASTINGS_MAPPINGS_HPP

// Transforms between the five parameterizations of the Hastings family.
// Each returns a symmetric function evaluated lazily per pair; composing a
// transform with the matching acceptance function reproduces the source
// acceptance probability.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "hastings/acceptance.hpp"
#include "hastings/model.hpp"
#include "hastings/symmetric_fn.hpp"

namespace hastings {

/// A transform output together with its input and the construction used.
template <class State>
struct MappedFn {
  SymmetricFn<State> source;
  SymmetricFn<State> result;
  std::string construction;
};

namespace detail {

/// log(p(x)/gamma(x|y) + p(y)/gamma(y|x))
inline double log_weight_sum(const PairLogs &t) { return log_add(t.w_x(), t.w_y()); }

/// log (gamma(x|y)/p(x) + gamma(y|x)/p(y))^{-1}
inline double log_weight_harmonic(const PairLogs &t) { return -log_add(-t.w_x(), -t.w_y()); }

template <class State>
PairLogs checked_pair(const Model<State> &model, const State &x, const State &y) {
  const PairLogs t = pair_logs(model, x, y);
  if (t.w_x() == kNegInf && t.w_y() == kNegInf) {
    throw_degenerate("both states have zero mass", x, y);
  }
  return t;
}

inline Regime classify(const PairLogs &t, double log_k) {
  const double wx = t.w_x();
  const double wy = t.w_y();
  return Bounds{0.0, 0.0, std::min(wx, wy), std::max(wx, wy)}.classify(log_k);
}

/// log s_MH = log(1 + min(R, 1/R)) with R the MH ratio.
template <class State>
double log_s_mh(const PairLogs &t, const State &x, const State &y) {
  const double log_r = log_mh_ratio(t, x, y);
  return std::log1p(std::exp(-std::abs(log_r)));
}

template <class State, class F>
SymmetricFn<State> derived(Role role, std::string description, const Model<State> &model, F body) {
  return SymmetricFn<State>::symmetric(
      role,
      [model, body](const State &x, const State &y) { return body(checked_pair(model, x, y), x, y); },
      std::move(description));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Catalog parameters
// ---------------------------------------------------------------------------

/// s that turns the Hastings form into Metropolis-Hastings.
template <class State>
SymmetricFn<State> s_mh(const Model<State> &model) {
  return detail::derived<State>(Role::s, "s_mh", model,
                                [](const PairLogs &t, const State &x, const State &y) {
                                  return detail::log_s_mh(t, x, y);
                                });
}

/// s = min(gamma(x|y)/p(x),1) min(gamma(y|x)/p(y),1) (p(x)/gamma(x|y) + p(y)/gamma(y|x)).
template <class State>
SymmetricFn<State> s_special(const Model<State> &model) {
  return detail::derived<State>(Role::s, "s_special", model,
                                [](const PairLogs &t, const State &, const State &) {
                                  return std::min(-t.w_x(), 0.0) + std::min(-t.w_y(), 0.0) +
                                         detail::log_weight_sum(t);
                                });
}

/// delta = min{p(y) gamma(x|y), p(x) gamma(y|x)}, the Stein form of MH.
template <class State>
SymmetricFn<State> delta_min_product(const Model<State> &model) {
  return detail::derived<State>(Role::delta, "min_product", model,
                                [](const PairLogs &t, const State &, const State &) {
                                  return std::min(t.backward(), t.forward());
                                });
}

/// k = p(x)/gamma(x|y) + p(y)/gamma(y|x) >= H; Algorithm M then gives Barker.
template <class State>
SymmetricFn<State> k_barker_sum(const Model<State> &model) {
  return detail::derived<State>(Role::k, "barker_sum", model,
                                [](const PairLogs &t, const State &, const State &) {
                                  return detail::log_weight_sum(t);
                                });
}

/// k = (gamma(x|y)/p(x) + gamma(y|x)/p(y))^{-1} <= L; also Barker.
template <class State>
SymmetricFn<State> k_barker_harmonic(const Model<State> &model) {
  return detail::derived<State>(Role::k, "barker_harmonic", model,
                                [](const PairLogs &t, const State &, const State &) {
                                  return detail::log_weight_harmonic(t);
                                });
}

/// C = (p(x)/gamma(x|y) + p(y)/gamma(y|x)) / H, the inflation that makes MAR Barker.
template <class State>
SymmetricFn<State> C_barker(const Model<State> &model) {
  return detail::derived<State>(Role::C, "c_barker", model,
                                [](const PairLogs &t, const State &, const State &) {
                                  return detail::log_weight_sum(t) - std::max(t.w_x(), t.w_y());
                                });
}

/// Majorizer M = C H.
template <class State>
SymmetricFn<State> M_from_C(const Model<State> &model, const SymmetricFn<State> &C) {
  detail::require_role(C, Role::C, "M_from_C");
  return detail::derived<State>(Role::M, "C*H[" + C.description() + "]", model,
                                [C](const PairLogs &t, const State &x, const State &y) {
                                  return detail::log_mul(C.log_value(x, y), std::max(t.w_x(), t.w_y()));
                                });
}

/// Minorizer m = L / C.
template <class State>
SymmetricFn<State> m_from_C(const Model<State> &model, const SymmetricFn<State> &C) {
  detail::require_role(C, Role::C, "m_from_C");
  return detail::derived<State>(Role::m, "L/C[" + C.description() + "]", model,
                                [C](const PairLogs &t, const State &x, const State &y) {
                                  return detail::log_div(std::min(t.w_x(), t.w_y()), C.log_value(x, y));
                                });
}

// ---------------------------------------------------------------------------
// s <-> M, m
// ---------------------------------------------------------------------------

/// M_s = (1/s)(p(x)/gamma(x|y) + p(y)/gamma(y|x)) >= H; infinite where s = 0.
template <class State>
SymmetricFn<State> M_from_s(const Model<State> &model, const SymmetricFn<State> &s) {
  detail::require_role(s, Role::s, "M_from_s");
  return detail::derived<State>(Role::M, "M_s[" + s.description() + "]", model,
                                [s](const PairLogs &t, const State &x, const State &y) {
                                  const double log_s = s.log_value(x, y);
                                  return log_s == kNegInf ? kPosInf
                                                          : detail::log_weight_sum(t) - log_s;
                                });
}

/// m_s = s (gamma(x|y)/p(x) + gamma(y|x)/p(y))^{-1} <= L.
template <class State>
SymmetricFn<State> m_from_s(const Model<State> &model, const SymmetricFn<State> &s) {
  detail::require_role(s, Role::s, "m_from_s");
  return detail::derived<State>(Role::m, "m_s[" + s.description() + "]", model,
                                [s](const PairLogs &t, const State &x, const State &y) {
                                  return detail::log_mul(s.log_value(x, y),
                                                         detail::log_weight_harmonic(t));
                                });
}

/// Inverse of M_from_s on role-M functions.
template <class State>
SymmetricFn<State> s_from_M(const Model<State> &model, const SymmetricFn<State> &M) {
  detail::require_role(M, Role::M, "s_from_M");
  return detail::derived<State>(Role::s, "s_M[" + M.description() + "]", model,
                                [M](const PairLogs &t, const State &x, const State &y) {
                                  const double log_M = M.log_value(x, y);
                                  const double log_H = std::max(t.w_x(), t.w_y());
                                  if (!(log_M >= log_H + detail::log_lower_slack())) {
                                    throw ConditionViolation("s_from_M: M < H at " +
                                                             detail::pair_text(x, y));
                                  }
                                  return detail::log_div(detail::log_weight_sum(t), log_M);
                                });
}

/// Inverse of m_from_s on role-m functions.
template <class State>
SymmetricFn<State> s_from_m(const Model<State> &model, const SymmetricFn<State> &m) {
  detail::require_role(m, Role::m, "s_from_m");
  return detail::derived<State>(Role::s, "s_m[" + m.description() + "]", model,
                                [m](const PairLogs &t, const State &x, const State &y) {
                                  const double log_m = m.log_value(x, y);
                                  const double log_L = std::min(t.w_x(), t.w_y());
                                  if (!(log_m <= log_L + detail::log_upper_slack())) {
                                    throw ConditionViolation("s_from_m: m > L at " +
                                                             detail::pair_text(x, y));
                                  }
                                  return detail::log_div(log_m, detail::log_weight_harmonic(t));
                                });
}

// ---------------------------------------------------------------------------
// k -> s, delta, M, m
// ---------------------------------------------------------------------------

/// Hastings s reproducing alpha_m(k), chosen by the regime of k at each pair.
template <class State>
SymmetricFn<State> s_from_k(const Model<State> &model, const SymmetricFn<State> &k) {
  detail::require_role(k, Role::k, "s_from_k");
  return detail::derived<State>(Role::s, "s_k[" + k.description() + "]", model,
                                [k](const PairLogs &t, const State &x, const State &y) {
                                  const double log_k = detail::log_k_checked(k, x, y);
                                  switch (detail::classify(t, log_k)) {
                                  case Regime::above:
                                    return detail::log_weight_sum(t) - log_k;
                                  case Regime::between:
                                    return detail::log_s_mh(t, x, y);
                                  case Regime::below:
                                    break;
                                  }
                                  return log_k - detail::log_weight_harmonic(t);
                                });
}

/// Stein delta reproducing alpha_m(k).
template <class State>
SymmetricFn<State> delta_from_k(const Model<State> &model, const SymmetricFn<State> &k) {
  detail::require_role(k, Role::k, "delta_from_k");
  return detail::derived<State>(Role::delta, "delta_k[" + k.description() + "]", model,
                                [k](const PairLogs &t, const State &x, const State &y) {
                                  const double log_k = detail::log_k_checked(k, x, y);
                                  switch (detail::classify(t, log_k)) {
                                  case Regime::above:
                                    return detail::log_div(detail::log_mul(t.p_x, t.p_y), log_k);
                                  case Regime::between:
                                    return std::min(t.backward(), t.forward());
                                  case Regime::below:
                                    break;
                                  }
                                  return detail::log_mul(log_k, detail::log_mul(t.g_xy, t.g_yx));
                                });
}

/// M_k = k max{p(x)/(k gamma(x|y)), 1} max{p(y)/(k gamma(y|x)), 1} >= H.
template <class State>
SymmetricFn<State> M_from_k(const Model<State> &model, const SymmetricFn<State> &k) {
  detail::require_role(k, Role::k, "M_from_k");
  return detail::derived<State>(Role::M, "M_k[" + k.description() + "]", model,
                                [k](const PairLogs &t, const State &x, const State &y) {
                                  const double log_k = detail::log_k_checked(k, x, y);
                                  return log_k + std::max(t.w_x() - log_k, 0.0) +
                                         std::max(t.w_y() - log_k, 0.0);
                                });
}

/// m_k = k min{p(x)/(k gamma(x|y)), 1} min{p(y)/(k gamma(y|x)), 1} <= L.
template <class State>
SymmetricFn<State> m_from_k(const Model<State> &model, const SymmetricFn<State> &k) {
  detail::require_role(k, Role::k, "m_from_k");
  return detail::derived<State>(Role::m, "m_k[" + k.description() + "]", model,
                                [k](const PairLogs &t, const State &x, const State &y) {
                                  const double log_k = detail::log_k_checked(k, x, y);
                                  return log_k + std::min(t.w_x() - log_k, 0.0) +
                                         std::min(t.w_y() - log_k, 0.0);
                                });
}

// ---------------------------------------------------------------------------
// delta -> M, m
// ---------------------------------------------------------------------------

/// M_delta = p(x) p(y) / delta >= H; infinite where delta = 0.
template <class State>
SymmetricFn<State> M_from_delta(const Model<State> &model, const SymmetricFn<State> &delta) {
  detail::require_role(delta, Role::delta, "M_from_delta");
  return detail::derived<State>(Role::M, "M_delta[" + delta.description() + "]", model,
                                [delta](const PairLogs &t, const State &x, const State &y) {
                                  const double log_d = delta.log_value(x, y);
                                  return log_d == kNegInf
                                             ? kPosInf
                                             : detail::log_div(detail::log_mul(t.p_x, t.p_y), log_d);
                                });
}

/// m_delta = delta / (gamma(x|y) gamma(y|x)) <= L.
template <class State>
SymmetricFn<State> m_from_delta(const Model<State> &model, const SymmetricFn<State> &delta) {
  detail::require_role(delta, Role::delta, "m_from_delta");
  return detail::derived<State>(Role::m, "m_delta[" + delta.description() + "]", model,
                                [delta](const PairLogs &t, const State &x, const State &y) {
                                  return detail::log_div(delta.log_value(x, y),
                                                         detail::log_mul(t.g_xy, t.g_yx));
                                });
}

template <class State>
MappedFn<State> mapped(SymmetricFn<State> source, SymmetricFn<State> result, std::string construction) {
  return {std::move(source), std::move(result), std::move(construction)};
}

} // namespace hastings

#endif // HASTINGS_MAPPINGS_HPP
