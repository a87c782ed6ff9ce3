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

#ifndef EVOEMO_SCENARIO_H_
#define EVOEMO_SCENARIO_H_

#include <string>
#include <string_view>
#include <vector>

namespace evoemo {

enum class ItemCondition { kNew, kUsed };

// One bargaining case. Prices are in currency units.
struct Scenario {
  std::string id;
  std::string title;
  std::string category;
  std::string description;
  double list_price = 0;    // seller's opening ask
  double cost_price = 0;    // seller's reservation price
  double buyer_target = 0;  // price the buyer aims for
  ItemCondition condition = ItemCondition::kUsed;

  // 0 < cost_price <= list_price and 0 < buyer_target <= list_price.
  void Validate() const;
  bool operator==(const Scenario&) const = default;
};

// Parses a JSON array of scenario objects. Errors name the source, the line
// of the offending element and the scenario id.
std::vector<Scenario> ParseScenarios(std::string_view text,
                                     std::string_view source = "<input>");
std::vector<Scenario> LoadScenarios(const std::string& path);

}  // namespace evoemo

#endif  // EVOEMO_SCENARIO_H_
