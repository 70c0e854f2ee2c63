/*
 * Copyright 2026 The jetlaw Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef JETLAW_ERROR_HPP
#define JETLAW_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jetlaw {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Expression outside the supported class (non-integer power of a symbolic
/// base, exponential with a non-linear argument, division by zero, ...).
class UnsupportedExpression : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error("at position " + std::to_string(position) + ": " + message),
        position_(position),
        detail_(message) {}

  [[nodiscard]] std::size_t position() const { return position_; }
  [[nodiscard]] const std::string& detail() const { return detail_; }

 private:
  std::size_t position_;
  std::string detail_;
};

class BindingConflict : public Error {
 public:
  using Error::Error;
};

/// The equation cannot be solved for u_t, so reduction modulo the equation
/// is undefined.
class ReductionError : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class ClassificationFailure : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Numerical run stopped early (parabolicity lost or blow-up).
class NumericalAbort : public Error {
 public:
  NumericalAbort(double time, const std::string& message)
      : Error(message + " (t = " + std::to_string(time) + ")"), time_(time) {}
  [[nodiscard]] double time() const { return time_; }

 private:
  double time_;
};

}  // namespace jetlaw

#endif  // JETLAW_ERROR_HPP
