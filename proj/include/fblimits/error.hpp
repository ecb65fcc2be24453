/* Copyright 2026 The fblimits Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <stdexcept>
#include <string>

namespace fbl {

// Base of every error thrown by the library. The CLI maps subclasses to
// exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

// Malformed input: bad probabilities, out-of-range parameters.
class ValidationError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "validation"; }
};

// Reducible or periodic chain where the operation needs ergodicity.
class StructuralError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "structural"; }
};

// A size budget (type classes, enumeration, trials) would be exceeded.
class BudgetError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "budget"; }
};

// Operation not defined for this input, e.g. rank queries on a sampled
// spectrum.
class UnsupportedError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "unsupported"; }
};

// Numerically meaningless request (zero variance in a bound, etc).
class NumericError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "numeric"; }
};

// Series did not converge within its lag budget.
class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& what, double partial_sum, long lags)
      : NumericError(what), partial_sum_(partial_sum), lags_(lags) {}
  const char* kind() const noexcept override { return "convergence"; }
  double partial_sum() const { return partial_sum_; }
  long lags() const { return lags_; }

 private:
  double partial_sum_;
  long lags_;
};

}  // namespace fbl
