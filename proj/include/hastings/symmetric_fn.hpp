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

#ifndef HASTINGS_SYMMETRIC_FN_HPP
#define HASTINGS_SYMMETRIC_FN_HPP

#include <cmath>
#include <functional>
#include <string>
#include <string_view>
#include <utility>

#include "hastings/model.hpp"

namespace hastings {

/**
 * What a symmetric function parameterizes.
 *
 *   k      Algorithm M coefficient, any positive value
 *   s      Hastings' s, constrained so that 0 <= alpha_HA <= 1
 *   delta  Stein's delta, constrained by delta(x,y) <= p(x) gamma(y|x)
 *   M      relative majorizing coefficient, M >= H
 *   m      relative minorizing coefficient, m <= L
 *   C      relative inflation factor, C >= 1
 */
enum class Role { k, s, delta, M, m, C };

constexpr std::string_view to_string(Role role) noexcept {
  switch (role) {
  case Role::k: return "k";
  case Role::s: return "s";
  case Role::delta: return "delta";
  case Role::M: return "M";
  case Role::m: return "m";
  case Role::C: return "C";
  }
  return "?";
}

/**
 * A role-tagged function of a pair of states, evaluated in log space.
 *
 * Functions built with symmetric() order their arguments canonically before
 * evaluation, so f(x,y) and f(y,x) are bitwise identical. Functions built with
 * the raw constructor are taken as given and must be checked with
 * validate_symmetric_fn.
 */
template <class State>
class SymmetricFn {
public:
  using LogFn = std::function<double(const State &, const State &)>;

  SymmetricFn(Role role, LogFn log_fn, std::string description)
      : role_(role), log_fn_(std::move(log_fn)), description_(std::move(description)) {}

  static SymmetricFn symmetric(Role role, LogFn log_fn, std::string description) {
    auto ordered = [fn = std::move(log_fn)](const State &x, const State &y) {
      return y < x ? fn(y, x) : fn(x, y);
    };
    return SymmetricFn(role, std::move(ordered), std::move(description));
  }

  /// Wraps a linear-space function; zero maps to a log value of -inf.
  static SymmetricFn from_values(Role role, std::function<double(const State &, const State &)> f,
                                 std::string description, bool canonical_order = true) {
    LogFn log_fn = [f = std::move(f)](const State &x, const State &y) { return std::log(f(x, y)); };
    return canonical_order ? symmetric(role, std::move(log_fn), std::move(description))
                           : SymmetricFn(role, std::move(log_fn), std::move(description));
  }

  static SymmetricFn constant(Role role, double value) {
    const double log_value = std::log(value);
    return SymmetricFn(
        role, [log_value](const State &, const State &) { return log_value; },
        std::string(to_string(role)) + "=" + detail::to_text(value));
  }

  Role role() const noexcept { return role_; }
  const std::string &description() const noexcept { return description_; }

  double log_value(const State &x, const State &y) const { return log_fn_(x, y); }
  double operator()(const State &x, const State &y) const { return std::exp(log_fn_(x, y)); }

  SymmetricFn with_role(Role role) const {
    SymmetricFn copy = *this;
    copy.role_ = role;
    return copy;
  }

private:
  Role role_;
  LogFn log_fn_;
  std::string description_;
};

} // namespace hastings

#endif // HASTINGS_SYMMETRIC_FN_HPP
