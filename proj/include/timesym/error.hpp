// Copyright 2026 The timesym Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace timesym {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A vector, pattern or grid has the wrong shape.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// A quantum state cannot be used (zero norm).
class InvalidStateError : public Error {
  public:
    using Error::Error;
};

/// An argument lies outside the mathematical domain of a function.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A documented precondition does not hold.
class PreconditionError : public Error {
  public:
    using Error::Error;
};

/// A test statistic could not be formed (e.g. every bin failed screening).
class DegenerateTestError : public Error {
  public:
    using Error::Error;
};

class InsufficientDataError : public Error {
  public:
    using Error::Error;
};

/// Conditioning on an event of probability zero.
class ConditioningError : public Error {
  public:
    using Error::Error;
};

class NoEquilibriumError : public Error {
  public:
    using Error::Error;
};

/// Post-selection left no surviving trajectories.
class ResampleExhaustedError : public Error {
  public:
    ResampleExhaustedError(const std::string &what, std::size_t achieved)
        : Error(what), achieved_(achieved) {}
    std::size_t achieved() const noexcept { return achieved_; }

  private:
    std::size_t achieved_;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace timesym
