// Copyright 2026 The spinmacro Authors.
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

#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace spinmacro {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad index, out-of-range
/// parameter, incompatible operator kind, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A matrix failed the density-matrix invariants (Hermitian, unit trace, PSD).
class InvalidState : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or stream.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// An iterative method did not converge, or an integrator left the set of
/// physical states. `best_value` carries the best objective value seen when
/// that is meaningful (optimizer failures), NaN otherwise.
class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& what,
                            double best_value = std::numeric_limits<double>::quiet_NaN())
      : Error(what), best_value_(best_value) {}

  double best_value() const noexcept { return best_value_; }

 private:
  double best_value_;
};

}  // namespace spinmacro
