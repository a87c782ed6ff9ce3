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

#include "evoemo/scenario.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "evoemo/errors.h"
#include "evoemo/serialization.h"

namespace evoemo {
namespace {

std::string Price(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

// Byte offsets of the elements of a top-level JSON array.
std::vector<size_t> ElementOffsets(std::string_view text) {
  std::vector<size_t> offsets;
  int depth = 0;
  bool in_string = false;
  bool expecting_element = false;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == ' ' || c == '\n' || c == '\r' || c == '\t') continue;
    if (depth == 1 && expecting_element && c != ']') {
      offsets.push_back(i);
      expecting_element = false;
    }
    switch (c) {
      case '"':
        in_string = true;
        break;
      case '[':
      case '{':
        if (depth == 0 && c == '[') expecting_element = true;
        ++depth;
        break;
      case ']':
      case '}':
        --depth;
        break;
      case ',':
        if (depth == 1) expecting_element = true;
        break;
      default:
        break;
    }
  }
  return offsets;
}

int LineAt(std::string_view text, size_t offset) {
  return 1 + static_cast<int>(std::count(text.begin(),
                                         text.begin() + std::min(offset, text.size()),
                                         '\n'));
}

}  // namespace

void Scenario::Validate() const {
  if (id.empty()) throw ValidationError("scenario id is empty");
  const std::string who = "scenario '" + id + "': ";
  for (double v : {list_price, cost_price, buyer_target}) {
    if (!std::isfinite(v)) throw ValidationError(who + "prices must be finite");
  }
  if (!(list_price > 0)) throw ValidationError(who + "list_price must be positive");
  if (!(cost_price > 0)) throw ValidationError(who + "cost_price must be positive");
  if (!(buyer_target > 0)) {
    throw ValidationError(who + "buyer_target must be positive");
  }
  if (cost_price > list_price) {
    throw ValidationError(who + "cost_price " + Price(cost_price) +
                          " exceeds list_price " + Price(list_price));
  }
  if (buyer_target > list_price) {
    throw ValidationError(who + "buyer_target " + Price(buyer_target) +
                          " exceeds list_price " + Price(list_price));
  }
}

std::vector<Scenario> ParseScenarios(std::string_view text,
                                     std::string_view source) {
  const std::string where(source);
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(where + ": " + e.what());
  }
  if (!doc.is_array()) {
    throw ParseError(where + ":1: expected an array of scenarios");
  }
  const std::vector<size_t> offsets = ElementOffsets(text);
  std::vector<Scenario> scenarios;
  std::set<std::string> seen;
  for (size_t i = 0; i < doc.size(); ++i) {
    const int line = i < offsets.size() ? LineAt(text, offsets[i]) : 0;
    const std::string prefix = where + ":" + std::to_string(line) + ": ";
    Scenario scenario;
    try {
      scenario = doc[i].get<Scenario>();
    } catch (const Json::exception& e) {
      throw ParseError(prefix + "scenario #" + std::to_string(i + 1) + ": " +
                       e.what());
    } catch (const Error& e) {
      throw ParseError(prefix + e.what());
    }
    try {
      scenario.Validate();
    } catch (const ValidationError& e) {
      throw ValidationError(prefix + e.what());
    }
    if (!seen.insert(scenario.id).second) {
      throw ValidationError(prefix + "duplicate scenario id '" + scenario.id +
                            "'");
    }
    scenarios.push_back(std::move(scenario));
  }
  return scenarios;
}

std::vector<Scenario> LoadScenarios(const std::string& path) {
  return ParseScenarios(ReadFile(path), path);
}

}  // namespace evoemo
