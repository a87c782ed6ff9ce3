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

#ifndef EVOEMO_TESTS_TEST_UTIL_H_
#define EVOEMO_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "evoemo/scenario.h"

namespace evoemo::testing {

inline Scenario MakeScenario(std::string id, double list, double cost,
                             double target) {
  Scenario s;
  s.id = std::move(id);
  s.title = "Test item";
  s.category = "misc";
  s.list_price = list;
  s.cost_price = cost;
  s.buyer_target = target;
  return s;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path TempDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("evoemo_test_" + name + "_" +
                    std::to_string(std::random_device{}()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string DataPath(const std::string& rel) {
  return std::string(EVOEMO_TEST_DATA_DIR) + "/" + rel;
}

}  // namespace evoemo::testing

#endif  // EVOEMO_TESTS_TEST_UTIL_H_
