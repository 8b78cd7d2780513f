// Copyright 2026 The gbdyn Authors
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

#ifndef GBDYN_ERROR_H_
#define GBDYN_ERROR_H_

#include <stdexcept>
#include <string>

namespace gbdyn {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument shapes or dimensions do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A computation produced a non-finite value or a solve broke down.
class NumericError : public Error {
 public:
  using Error::Error;
};

// A file could not be parsed as the expected binary format.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Invalid user-supplied configuration or parameter value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace gbdyn

#endif  // GBDYN_ERROR_H_
