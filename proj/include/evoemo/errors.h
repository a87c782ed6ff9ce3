// Copyright 2026 The EvoEmo Authors
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

#ifndef EVOEMO_ERRORS_H_
#define EVOEMO_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace evoemo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input or record that violates a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A transition-matrix row with no probability mass.
class DegenerateRowError : public Error {
 public:
  using Error::Error;
};

// Backend failure that aborts an episode. Never converted into an outcome.
class TransportError : public Error {
 public:
  using Error::Error;
};

// Savings are only defined for accepted outcomes.
class UndefinedSavingsError : public Error {
 public:
  using Error::Error;
};

class MissingArtifactError : public Error {
 public:
  explicit MissingArtifactError(std::vector<std::string> missing);
  const std::vector<std::string>& missing() const { return missing_; }

 private:
  std::vector<std::string> missing_;
};

}  // namespace evoemo

#endif  // EVOEMO_ERRORS_H_
