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

#include "evoemo/errors.h"

#include <utility>

namespace evoemo {
namespace {

std::string MissingMessage(const std::vector<std::string>& missing) {
  std::string message = "missing run artifacts:";
  for (const std::string& name : missing) message += " " + name;
  return message;
}

}  // namespace

MissingArtifactError::MissingArtifactError(std::vector<std::string> missing)
    : Error(MissingMessage(missing)), missing_(std::move(missing)) {}

}  // namespace evoemo
