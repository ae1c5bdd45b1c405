// Copyright 2026 dmtlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License.  You may obtain a copy
// of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.  See the
// License for the specific language governing permissions and limitations
// under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace dmtlab {

/// Base class for all library errors.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid input: bad dimensions, non-PSD covariance, malformed files,
/// out-of-domain parameters.  Maps to process exit code 2 in the CLI.
class validation_error : public error {
 public:
  explicit validation_error(const std::string& what) : error(what) {}
};

/// Not enough qualifying data to produce a result (e.g. fewer than two grid
/// points with the required event count for an exponent fit).  Maps to
/// process exit code 3 in the CLI.
class insufficient_data_error : public error {
 public:
  explicit insufficient_data_error(const std::string& what) : error(what) {}
};

}  // namespace dmtlab
