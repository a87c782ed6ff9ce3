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

#ifndef EVOEMO_SERIALIZATION_H_
#define EVOEMO_SERIALIZATION_H_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "evoemo/agents.h"
#include "evoemo/emotion_policy.h"
#include "evoemo/evolution.h"
#include "evoemo/harness.h"
#include "evoemo/reward.h"
#include "evoemo/scenario.h"
#include "evoemo/transcript.h"

namespace evoemo {

using Json = nlohmann::ordered_json;

// Field order is fixed so that stores are byte-stable.
void to_json(Json& j, const TemperatureParams& t);
void to_json(Json& j, const EmotionPolicy& p);
void from_json(const Json& j, EmotionPolicy& p);
void to_json(Json& j, const Scenario& s);
void from_json(const Json& j, Scenario& s);
void to_json(Json& j, const Turn& t);
void from_json(const Json& j, Turn& t);
void to_json(Json& j, const Transcript& t);
void from_json(const Json& j, Transcript& t);
void to_json(Json& j, const Outcome& o);
void from_json(const Json& j, Outcome& o);
void to_json(Json& j, const Score& s);
void from_json(const Json& j, Score& s);
void to_json(Json& j, const ScriptedParams& p);
void from_json(const Json& j, ScriptedParams& p);
void to_json(Json& j, const AgentConfig& c);
void from_json(const Json& j, AgentConfig& c);
void to_json(Json& j, const RewardConfig& c);
void from_json(const Json& j, RewardConfig& c);
void to_json(Json& j, const GenomeSpace& s);
void from_json(const Json& j, GenomeSpace& s);
void to_json(Json& j, const EvolutionConfig& c);
void from_json(const Json& j, EvolutionConfig& c);
void to_json(Json& j, const GenerationStats& s);
void from_json(const Json& j, GenerationStats& s);
void to_json(Json& j, const EvolutionCheckpoint& c);
void from_json(const Json& j, EvolutionCheckpoint& c);
void to_json(Json& j, const EpisodeRecord& r);
void from_json(const Json& j, EpisodeRecord& r);
void to_json(Json& j, const ExperimentConfig& c);
// Fields missing from `j` keep their current values, so a partial document
// can be layered over defaults.
void from_json(const Json& j, ExperimentConfig& c);
void to_json(Json& j, const MetricsReport& m);

// Compact single-line dump.
std::string DumpLine(const Json& j);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, const std::string& text);

// Line-delimited records.
void AppendJsonLine(const std::filesystem::path& path, const Json& j);
std::vector<Json> ReadJsonLines(const std::filesystem::path& path);

}  // namespace evoemo

#endif  // EVOEMO_SERIALIZATION_H_
