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

#ifndef HASTINGS_ERRORS_HPP
#define HASTINGS_ERRORS_HPP

#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hastings {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid model construction input (dimensions, negative entries, row sums).
class ModelError : public Error {
public:
  using Error::Error;
};

/// Both sides of a ratio vanish, so the acceptance probability is undefined.
class DegeneratePairError : public Error {
public:
  using Error::Error;
};

/// A parameter breaks its role constraint at some pair (Hastings condition,
/// Stein condition, majorizer or minorizer bound, C >= 1).
class ConditionViolation : public Error {
public:
  using Error::Error;
};

/// A rule was bound to a symmetric function of the wrong role.
class RoleMismatch : public Error {
public:
  using Error::Error;
};

/// Power iteration did not reach the requested residual, or the kernel is reducible.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

namespace detail {

template <class T>
std::string to_text(const T &value) {
  std::ostringstream os;
  os << std::setprecision(17) << value;
  return os.str();
}

template <class State>
std::string pair_text(const State &x, const State &y) {
  return "(" + to_text(x) + ", " + to_text(y) + ")";
}

} // namespace detail
} // namespace hastings

#endif // HASTINGS_ERRORS_HPP
