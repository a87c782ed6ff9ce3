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

#include "evoemo/serialization.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "evoemo/errors.h"

namespace evoemo {
namespace {

template <typename T>
void ReadIf(const Json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

Json OptionalNumber(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::optional<double> ReadOptionalNumber(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

Json EmotionTableJson(const EmotionTable& table) {
  Json j = Json::object();
  for (Emotion e : kAllEmotions) j[std::string(EmotionLabel(e))] = table[EmotionIndex(e)];
  return j;
}

EmotionTable ReadEmotionTable(const Json& j) {
  EmotionTable table{};
  std::array<bool, kNumEmotions> seen{};
  for (const auto& [label, value] : j.items()) {
    const Emotion e = ParseEmotion(label);
    table[EmotionIndex(e)] = value.get<double>();
    seen[EmotionIndex(e)] = true;
  }
  for (int i = 0; i < kNumEmotions; ++i) {
    if (!seen[i]) {
      throw ValidationError("emotion table is missing '" +
                            std::string(EmotionLabel(EmotionFromIndex(i))) + "'");
    }
  }
  return table;
}

// Infinity has no JSON literal; it is stored as the string "inf".
Json NumberOrInf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double ReadNumberOrInf(const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ParseError("expected a number, got '" + s + "'");
  }
  return j.get<double>();
}

}  // namespace

void to_json(Json& j, const TemperatureParams& t) {
  j = Json{{"tau0", t.tau0}, {"delta", t.delta}};
}

void to_json(Json& j, const EmotionPolicy& p) {
  Json matrix = Json::array();
  for (const EmotionRow& row : p.matrix.rows()) {
    matrix.push_back(Json(std::vector<double>(row.begin(), row.end())));
  }
  j = Json{{"id", p.id},
           {"initial_emotion", EmotionLabel(p.initial_emotion)},
           {"tau0", p.temperature.tau0},
           {"delta", p.temperature.delta},
           {"matrix", std::move(matrix)}};
}

void from_json(const Json& j, EmotionPolicy& p) {
  p.id = j.at("id").get<uint64_t>();
  p.initial_emotion = ParseEmotion(j.at("initial_emotion").get<std::string>());
  p.temperature.tau0 = j.at("tau0").get<double>();
  p.temperature.delta = j.at("delta").get<double>();
  const Json& matrix = j.at("matrix");
  if (!matrix.is_array() || matrix.size() != kNumEmotions) {
    throw ValidationError("matrix must have 7 rows");
  }
  std::array<EmotionRow, kNumEmotions> rows{};
  for (int i = 0; i < kNumEmotions; ++i) {
    const Json& row = matrix.at(i);
    if (!row.is_array() || row.size() != kNumEmotions) {
      throw ValidationError("matrix rows must have 7 columns");
    }
    for (int k = 0; k < kNumEmotions; ++k) rows[i][k] = row.at(k).get<double>();
  }
  p.matrix = TransitionMatrix::FromRows(rows);
  p.temperature.Validate();
}

void to_json(Json& j, const Scenario& s) {
  j = Json{{"id", s.id},
           {"title", s.title},
           {"category", s.category},
           {"description", s.description},
           {"list_price", s.list_price},
           {"cost_price", s.cost_price},
           {"buyer_target", s.buyer_target},
           {"condition", s.condition == ItemCondition::kNew ? "new" : "used"}};
}

void from_json(const Json& j, Scenario& s) {
  s.id = j.at("id").get<std::string>();
  s.title = j.value("title", "");
  s.category = j.value("category", "");
  s.description = j.value("description", "");
  s.list_price = j.at("list_price").get<double>();
  s.cost_price = j.at("cost_price").get<double>();
  s.buyer_target = j.at("buyer_target").get<double>();
  const std::string condition = j.value("condition", "used");
  if (condition == "new") {
    s.condition = ItemCondition::kNew;
  } else if (condition == "used") {
    s.condition = ItemCondition::kUsed;
  } else {
    throw ParseError("scenario '" + s.id + "': unknown condition '" +
                     condition + "'");
  }
}

void to_json(Json& j, const Turn& t) {
  j = Json{{"index", t.index},
           {"speaker", SpeakerLabel(t.speaker)},
           {"emotion", t.emotion ? Json(EmotionLabel(*t.emotion)) : Json(nullptr)},
           {"message", t.message},
           {"offer", OptionalNumber(t.offer)},
           {"accept", t.accept},
           {"walk_away", t.walk_away}};
}

void from_json(const Json& j, Turn& t) {
  t.index = j.at("index").get<int>();
  t.speaker = ParseSpeaker(j.at("speaker").get<std::string>());
  t.emotion.reset();
  if (j.contains("emotion") && !j.at("emotion").is_null()) {
    t.emotion = ParseEmotion(j.at("emotion").get<std::string>());
  }
  t.message = j.value("message", "");
  t.offer = ReadOptionalNumber(j, "offer");
  t.accept = j.value("accept", false);
  t.walk_away = j.value("walk_away", false);
}

void to_json(Json& j, const Transcript& t) {
  j = Json{{"scenario_id", t.scenario_id}, {"seed", t.seed}, {"turns", t.turns}};
}

void from_json(const Json& j, Transcript& t) {
  t.scenario_id = j.at("scenario_id").get<std::string>();
  t.seed = j.at("seed").get<uint64_t>();
  t.turns = j.at("turns").get<std::vector<Turn>>();
}

void to_json(Json& j, const Outcome& o) {
  j = Json{{"status", OutcomeLabel(o.status)},
           {"final_price", OptionalNumber(o.final_price)},
           {"rounds", o.rounds}};
}

void from_json(const Json& j, Outcome& o) {
  o.status = ParseOutcomeStatus(j.at("status").get<std::string>());
  o.final_price = ReadOptionalNumber(j, "final_price");
  o.rounds = j.at("rounds").get<int>();
}

void to_json(Json& j, const Score& s) {
  j = Json{{"success", s.success},
           {"savings", OptionalNumber(s.savings)},
           {"rounds", s.rounds},
           {"reward", s.reward}};
}

void from_json(const Json& j, Score& s) {
  s.success = j.at("success").get<bool>();
  s.savings = ReadOptionalNumber(j, "savings");
  s.rounds = j.at("rounds").get<int>();
  s.reward = j.at("reward").get<double>();
}

void to_json(Json& j, const ScriptedParams& p) {
  j = Json{{"base_concession", p.base_concession},
           {"emotion_weights", EmotionTableJson(p.emotion_weights)},
           {"breakdown_hazard", EmotionTableJson(p.breakdown_hazard)},
           {"accept_margin", p.accept_margin},
           {"opening_fraction", p.opening_fraction},
           {"habituation", p.habituation},
           {"hazard_onset", p.hazard_onset}};
}

void from_json(const Json& j, ScriptedParams& p) {
  ReadIf(j, "base_concession", p.base_concession);
  if (j.contains("emotion_weights")) {
    p.emotion_weights = ReadEmotionTable(j.at("emotion_weights"));
  }
  if (j.contains("breakdown_hazard")) {
    p.breakdown_hazard = ReadEmotionTable(j.at("breakdown_hazard"));
  }
  ReadIf(j, "accept_margin", p.accept_margin);
  ReadIf(j, "opening_fraction", p.opening_fraction);
  ReadIf(j, "habituation", p.habituation);
  ReadIf(j, "hazard_onset", p.hazard_onset);
  p.Validate();
}

void to_json(Json& j, const AgentConfig& c) {
  j = Json{{"backend", BackendLabel(c.backend)},
           {"role", RoleLabel(c.role)},
           {"model_name", c.model_name ? Json(*c.model_name) : Json(nullptr)},
           {"prompt_template_id",
            c.prompt_template_id ? Json(*c.prompt_template_id) : Json(nullptr)},
           {"scripted_params",
            c.scripted_params ? Json(*c.scripted_params) : Json(nullptr)},
           {"provider", c.provider},
           {"max_retries", c.max_retries}};
}

void from_json(const Json& j, AgentConfig& c) {
  if (j.contains("backend")) c.backend = ParseBackend(j.at("backend").get<std::string>());
  if (j.contains("role")) c.role = ParseRole(j.at("role").get<std::string>());
  if (j.contains("model_name")) {
    c.model_name = j.at("model_name").is_null()
                       ? std::nullopt
                       : std::optional(j.at("model_name").get<std::string>());
  }
  if (j.contains("prompt_template_id")) {
    c.prompt_template_id =
        j.at("prompt_template_id").is_null()
            ? std::nullopt
            : std::optional(j.at("prompt_template_id").get<std::string>());
  }
  if (j.contains("scripted_params")) {
    if (j.at("scripted_params").is_null()) {
      c.scripted_params.reset();
    } else {
      ScriptedParams params = c.scripted_params.value_or(ScriptedParams{});
      from_json(j.at("scripted_params"), params);
      c.scripted_params = params;
    }
  }
  ReadIf(j, "provider", c.provider);
  ReadIf(j, "max_retries", c.max_retries);
}

void to_json(Json& j, const RewardConfig& c) {
  j = Json{{"alpha", c.alpha},
           {"formulation", FormulationLabel(c.formulation)},
           {"weighted_beta", c.weighted_beta},
           {"t_max", c.t_max}};
}

void from_json(const Json& j, RewardConfig& c) {
  ReadIf(j, "alpha", c.alpha);
  if (j.contains("formulation")) {
    c.formulation = ParseFormulation(j.at("formulation").get<std::string>());
  }
  ReadIf(j, "weighted_beta", c.weighted_beta);
  ReadIf(j, "t_max", c.t_max);
}

void to_json(Json& j, const GenomeSpace& s) {
  Json allowed = Json::array();
  for (Emotion e : s.allowed_emotions()) allowed.push_back(EmotionLabel(e));
  j = Json{{"allowed", std::move(allowed)},
           {"grid_resolution", s.grid_resolution},
           {"fixed_temperature",
            s.fixed_temperature ? Json(*s.fixed_temperature) : Json(nullptr)}};
}

void from_json(const Json& j, GenomeSpace& s) {
  if (j.contains("allowed")) {
    s.allowed.fill(false);
    for (const Json& label : j.at("allowed")) {
      s.allowed[EmotionIndex(ParseEmotion(label.get<std::string>()))] = true;
    }
  }
  ReadIf(j, "grid_resolution", s.grid_resolution);
  if (j.contains("fixed_temperature")) {
    if (j.at("fixed_temperature").is_null()) {
      s.fixed_temperature.reset();
    } else {
      const Json& t = j.at("fixed_temperature");
      s.fixed_temperature =
          TemperatureParams{t.at("tau0").get<double>(), t.at("delta").get<double>()};
    }
  }
}

void to_json(Json& j, const EvolutionConfig& c) {
  j = Json{{"population_size", c.population_size},
           {"max_generations", c.max_generations},
           {"elitism_rate", c.elitism_rate},
           {"crossover_rate", c.crossover_rate},
           {"mutation_rate", c.mutation_rate},
           {"selection_lambda", c.selection_lambda},
           {"selection_mode", SelectionModeLabel(c.selection_mode)},
           {"tournament_size", c.tournament_size},
           {"convergence_epsilon", NumberOrInf(c.convergence_epsilon)},
           {"convergence_patience", c.convergence_patience},
           {"episodes_per_eval", c.episodes_per_eval},
           {"root_seed", c.root_seed},
           {"evaluation_seed",
            c.evaluation_seed ? Json(*c.evaluation_seed) : Json(nullptr)},
           {"seeding", SeedingLabel(c.seeding)},
           {"space", c.space}};
}

void from_json(const Json& j, EvolutionConfig& c) {
  ReadIf(j, "population_size", c.population_size);
  ReadIf(j, "max_generations", c.max_generations);
  ReadIf(j, "elitism_rate", c.elitism_rate);
  ReadIf(j, "crossover_rate", c.crossover_rate);
  ReadIf(j, "mutation_rate", c.mutation_rate);
  ReadIf(j, "selection_lambda", c.selection_lambda);
  if (j.contains("selection_mode")) {
    c.selection_mode = ParseSelectionMode(j.at("selection_mode").get<std::string>());
  }
  ReadIf(j, "tournament_size", c.tournament_size);
  if (j.contains("convergence_epsilon")) {
    c.convergence_epsilon = ReadNumberOrInf(j.at("convergence_epsilon"));
  }
  ReadIf(j, "convergence_patience", c.convergence_patience);
  ReadIf(j, "episodes_per_eval", c.episodes_per_eval);
  ReadIf(j, "root_seed", c.root_seed);
  if (j.contains("evaluation_seed")) {
    c.evaluation_seed = j.at("evaluation_seed").is_null()
                            ? std::nullopt
                            : std::optional(j.at("evaluation_seed").get<uint64_t>());
  }
  if (j.contains("seeding")) c.seeding = ParseSeeding(j.at("seeding").get<std::string>());
  if (j.contains("space")) from_json(j.at("space"), c.space);
}

void to_json(Json& j, const GenerationStats& s) {
  j = Json{{"generation", s.generation},
           {"policy_ids", s.policy_ids},
           {"rewards", s.rewards},
           {"best_reward", s.best_reward},
           {"mean_reward", s.mean_reward},
           {"best_policy_id", s.best_policy_id}};
}

void from_json(const Json& j, GenerationStats& s) {
  s.generation = j.at("generation").get<int>();
  s.policy_ids = j.at("policy_ids").get<std::vector<uint64_t>>();
  s.rewards = j.at("rewards").get<std::vector<double>>();
  s.best_reward = j.at("best_reward").get<double>();
  s.mean_reward = j.at("mean_reward").get<double>();
  s.best_policy_id = j.at("best_policy_id").get<uint64_t>();
}

void to_json(Json& j, const EvolutionCheckpoint& c) {
  j = Json{{"next_generation", c.next_generation},
           {"population", c.population},
           {"generations", c.generations},
           {"populations", c.populations},
           {"rng_state", c.rng_state},
           {"next_id", c.next_id},
           {"best_policy", c.best_policy},
           {"best_fitness", c.best_fitness},
           {"stagnant_generations", c.stagnant_generations}};
}

void from_json(const Json& j, EvolutionCheckpoint& c) {
  c.next_generation = j.at("next_generation").get<int>();
  c.population = j.at("population").get<std::vector<EmotionPolicy>>();
  c.generations = j.at("generations").get<std::vector<GenerationStats>>();
  c.populations =
      j.at("populations").get<std::vector<std::vector<EmotionPolicy>>>();
  c.rng_state = j.at("rng_state").get<std::string>();
  c.next_id = j.at("next_id").get<uint64_t>();
  c.best_policy = j.at("best_policy").get<EmotionPolicy>();
  c.best_fitness = j.at("best_fitness").get<double>();
  c.stagnant_generations = j.at("stagnant_generations").get<int>();
}

void to_json(Json& j, const EpisodeRecord& r) {
  j = Json{{"arm", r.arm},
           {"scenario_id", r.scenario_id},
           {"repetition", r.repetition},
           {"policy_id", r.policy_id ? Json(*r.policy_id) : Json(nullptr)},
           {"transcript", r.transcript},
           {"outcome", r.outcome},
           {"score", r.score}};
}

void from_json(const Json& j, EpisodeRecord& r) {
  r.arm = j.at("arm").get<std::string>();
  r.scenario_id = j.at("scenario_id").get<std::string>();
  r.repetition = j.at("repetition").get<int>();
  r.policy_id.reset();
  if (j.contains("policy_id") && !j.at("policy_id").is_null()) {
    r.policy_id = j.at("policy_id").get<uint64_t>();
  }
  r.transcript = j.at("transcript").get<Transcript>();
  r.outcome = j.at("outcome").get<Outcome>();
  r.score = j.at("score").get<Score>();
}

void to_json(Json& j, const ExperimentConfig& c) {
  j = Json{{"arm", ArmKindLabel(c.arm)},
           {"fixed_emotion",
            c.fixed_emotion ? Json(EmotionLabel(*c.fixed_emotion)) : Json(nullptr)},
           {"buyer", c.buyer},
           {"seller", c.seller},
           {"mediator", c.mediator},
           {"scenario_path", c.scenario_path},
           {"scenario_ids", c.scenario_ids},
           {"t_max", c.t_max},
           {"evolution", c.evolution},
           {"reward", c.reward},
           {"repetitions", c.repetitions},
           {"root_seed", c.root_seed},
           {"output_dir", c.output_dir},
           {"temperature_override", OptionalNumber(c.temperature_override)},
           {"prompt_dir", c.prompt_dir}};
}

void from_json(const Json& j, ExperimentConfig& c) {
  if (j.contains("arm")) c.arm = ParseArm(j.at("arm").get<std::string>());
  if (j.contains("fixed_emotion")) {
    c.fixed_emotion =
        j.at("fixed_emotion").is_null()
            ? std::nullopt
            : std::optional(ParseEmotion(j.at("fixed_emotion").get<std::string>()));
  }
  if (j.contains("buyer")) from_json(j.at("buyer"), c.buyer);
  if (j.contains("seller")) from_json(j.at("seller"), c.seller);
  if (j.contains("mediator")) from_json(j.at("mediator"), c.mediator);
  ReadIf(j, "scenario_path", c.scenario_path);
  ReadIf(j, "scenario_ids", c.scenario_ids);
  ReadIf(j, "t_max", c.t_max);
  if (j.contains("evolution")) from_json(j.at("evolution"), c.evolution);
  if (j.contains("reward")) from_json(j.at("reward"), c.reward);
  ReadIf(j, "repetitions", c.repetitions);
  ReadIf(j, "root_seed", c.root_seed);
  ReadIf(j, "output_dir", c.output_dir);
  if (j.contains("temperature_override")) {
    c.temperature_override = ReadOptionalNumber(j, "temperature_override");
  }
  ReadIf(j, "prompt_dir", c.prompt_dir);
}

void to_json(Json& j, const MetricsReport& m) {
  Json per = Json::array();
  for (const ScenarioMetrics& s : m.per_scenario) {
    per.push_back(Json{{"scenario_id", s.scenario_id},
                       {"n", s.n},
                       {"successes", s.successes},
                       {"mean_savings", OptionalNumber(s.mean_savings)},
                       {"mean_rounds", s.mean_rounds}});
  }
  j = Json{{"arm", m.arm},
           {"n", m.n},
           {"success_rate", m.success_rate},
           {"mean_savings", OptionalNumber(m.mean_savings)},
           {"savings_ci95", m.savings_ci95},
           {"mean_rounds", m.mean_rounds},
           {"per_scenario", std::move(per)}};
}

std::string DumpLine(const Json& j) { return j.dump(); }

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

void AppendJsonLine(const std::filesystem::path& path, const Json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump() << '\n';
}

std::vector<Json> ReadJsonLines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::vector<Json> records;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      records.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      throw ParseError(path.string() + ":" + std::to_string(number) + ": " +
                       e.what());
    }
  }
  return records;
}

}  // namespace evoemo
