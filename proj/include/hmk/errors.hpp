// Copyright 2026 The hmk Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace hmk {

// All library failures derive from Error. The C API maps each subclass to a
// distinct status code, and the CLI maps those to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed document or literal.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A sequence was queried outside the range it declares.
class CoverageError : public Error {
 public:
  using Error::Error;
};

// A generating vector is too short for the requested object.
class LengthError : public Error {
 public:
  using Error::Error;
};

// Two representatives of one weighted-degree class disagree.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An operation's hypothesis (e.g. positive semidefiniteness) does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Iteration caps, negative augmented coefficients and similar float trouble.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace hmk
