// Copyright 2026 The DRODA Authors
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

#ifndef DRODA_ERRORS_HPP
#define DRODA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace droda {

// Malformed arguments to a library call (dimension mismatch, empty cloud,
// zero direction, non-finite entries).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Experiment or sequence configuration that cannot be run as given.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A Monte Carlo mass estimate too close to zero to divide by.
class UnreliableEstimate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace droda

#endif  // DRODA_ERRORS_HPP
