// Copyright 2026 The ehwb Authors - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EHWB_ERRORS_HPP_
#define EHWB_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ehwb {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Iterative solver failed to reach its tolerance within the iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, const std::string& residual)
      : Error(what + " (residual " + residual + ")"), residual_(residual) {}
  const std::string& residual() const { return residual_; }

 private:
  std::string residual_;
};

// A pivot fell below the singularity threshold during elimination.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, int pivot_index)
      : Error(what + " (pivot index " + std::to_string(pivot_index) + ")"),
        pivot_index_(pivot_index) {}
  int pivot_index() const { return pivot_index_; }

 private:
  int pivot_index_;
};

// A scalar function was evaluated outside its domain (e.g. log of a
// non-positive eigenvalue). Carries the offending value as text.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, const std::string& value)
      : Error(what + " (value " + value + ")"), value_(value) {}
  const std::string& value() const { return value_; }

 private:
  std::string value_;
};

// The requested quantity cannot be resolved at the current working
// precision; the caller should retry with more decimal digits.
class PrecisionEscalationError : public Error {
 public:
  PrecisionEscalationError(const std::string& what, long suggested_digits)
      : Error(what + " (raise decimal digits to >= " +
              std::to_string(suggested_digits) + ")"),
        suggested_digits_(suggested_digits) {}
  long suggested_digits() const { return suggested_digits_; }

 private:
  long suggested_digits_;
};

// Experiment configuration failed validation; carries the offending field.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error("config field '" + field + "': " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace ehwb

#endif  // EHWB_ERRORS_HPP_
