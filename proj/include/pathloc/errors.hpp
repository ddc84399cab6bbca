// Copyright 2026 The pathloc Authors.
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
#include <vector>

namespace pathloc {

// Base of every error raised by the library. The CLI maps each subclass to a
// distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Bad option, unknown format tag, missing table, invalid config file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input is readable but too broken to trust (e.g. majority of lines malformed).
class DataQualityError : public Error {
 public:
  DataQualityError(const std::string& what, std::vector<std::string> samples = {})
      : Error(what), samples_(std::move(samples)) {}
  const std::vector<std::string>& samples() const { return samples_; }

 private:
  std::vector<std::string> samples_;
};

// A lookup table row that cannot be parsed. Message carries file and line.
class LoadError : public Error {
 public:
  using Error::Error;
};

// A caller violated a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A quantity is mathematically undefined for the given input.
class UndefinedError : public Error {
 public:
  using Error::Error;
};

}  // namespace pathloc
