// Copyright 2026 The robustsel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ROBUSTSEL_ERRORS_HPP_
#define ROBUSTSEL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace robustsel {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidIndexError : public Error {
 public:
  using Error::Error;
};

// Budget larger than the ground set.
class BudgetError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// Normalization or other oracle contract violation.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Exhaustive search refused because the instance is too large.
class InstanceTooLargeError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOracleError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double gradient_norm)
      : NumericalError(what), gradient_norm_(gradient_norm) {}
  double gradient_norm() const noexcept { return gradient_norm_; }

 private:
  double gradient_norm_;
};

class NotStronglyConcaveError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace robustsel

#endif  // ROBUSTSEL_ERRORS_HPP_
