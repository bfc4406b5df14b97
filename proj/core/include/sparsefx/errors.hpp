// Copyright 2026 The sparsefx Authors.
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

#ifndef SPARSEFX_ERRORS_HPP_
#define SPARSEFX_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace sparsefx {

// Base class of every error raised by the library. The three subclasses map
// one-to-one onto the command-line exit codes (2, 3, 4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent configuration / parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Problems with input data: unreadable files, malformed formats, shape
// mismatches.
class DataError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public DataError {
 public:
  using DataError::DataError;
};

// Numerical breakdown (no usable candidate, non-finite values, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace sparsefx

#endif  // SPARSEFX_ERRORS_HPP_
