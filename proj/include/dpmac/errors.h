// Copyright 2026 The dpmac Authors
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

#ifndef DPMAC_ERRORS_H_
#define DPMAC_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dpmac {

// Base class for every error raised by the library. The CLI maps the
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrix/vector shapes that do not chain or match.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration value or combination. Messages carry the field path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or unreadable input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// Quadrature non-convergence, search bracket failures and similar.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace dpmac

#endif  // DPMAC_ERRORS_H_
