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

#include "evoemo/harness.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "evoemo/errors.h"
#include "evoemo/llm.h"
#include "evoemo/serialization.h"

#ifndef EVOEMO_DEFAULT_SCENARIOS
#define EVOEMO_DEFAULT_SCENARIOS "data/scenarios.json"
#endif

namespace evoemo {
namespace {

namespace fs = std::filesystem;

constexpr double kZ95 = 1.959963984540054;
constexpr char kCiMethod[] =
    "normal approximation over per-scenario mean savings: "
    "mean +- 1.96 * sd / sqrt(k), k = scenarios with at least one success";

std::string Pretty(const Json& j) { return j.dump(2) + "\n"; }

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

int GenerationOfArm(const std::string& arm) {
  constexpr std::string_view kPrefix = "generation-";
  if (arm.rfind(kPrefix, 0) != 0) return -1;
  return std::stoi(arm.substr(kPrefix.size()));
}

std::string JoinRecords(const std::vector<EpisodeRecord>& records) {
  std::string out;
  for (const EpisodeRecord& r : records) out += DumpLine(Json(r)) + "\n";
  return out;
}

std::string TableHeader(AblationKind kind) {
  switch (kind) {
    case AblationKind::kRewardFormulation:
      return "Reward Function";
    case AblationKind::kEmotionTemperature:
      return "Temperature";
    case AblationKind::kIterations:
      break;
  }
  return "Iteration";
}

void EnsureEmptyOrCreate(const fs::path& dir) { fs::create_directories(dir); }

}  // namespace

void ExperimentConfig::Validate() const {
  if (arm == Arm::kFixedEmotion && !fixed_emotion) {
    throw ConfigError("fixed_emotion arm requires fixed_emotion");
  }
  if (t_max < 2) throw ConfigError("t_max must be >= 2");
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (buyer.role != Role::kBuyer) throw ConfigError("buyer config has the wrong role");
  if (seller.role != Role::kSeller) throw ConfigError("seller config has the wrong role");
  if (mediator.role != Role::kMediator) {
    throw ConfigError("mediator config has the wrong role");
  }
  buyer.Validate();
  seller.Validate();
  mediator.Validate();
  reward.Validate();
  if (arm == Arm::kEvoEmo) evolution.Validate();
  if (temperature_override && !(*temperature_override > 0)) {
    throw ConfigError("temperature_override must be positive");
  }
}

std::string DefaultScenarioPath() {
  if (const char* path = std::getenv("EVOEMO_SCENARIOS")) return path;
  return EVOEMO_DEFAULT_SCENARIOS;
}

std::vector<Scenario> LoadConfiguredScenarios(const ExperimentConfig& config) {
  std::vector<Scenario> all = LoadScenarios(
      config.scenario_path.empty() ? DefaultScenarioPath() : config.scenario_path);
  if (config.scenario_ids.empty()) return all;
  std::vector<Scenario> picked;
  for (const std::string& id : config.scenario_ids) {
    const auto it = std::find_if(all.begin(), all.end(),
                                 [&](const Scenario& s) { return s.id == id; });
    if (it == all.end()) throw ConfigError("unknown scenario id '" + id + "'");
    picked.push_back(*it);
  }
  return picked;
}

std::unique_ptr<NegotiationAgent> MakeAgent(const AgentConfig& config,
                                            const std::string& prompt_dir) {
  config.Validate();
  if (config.backend == Backend::kLlm) {
    return std::make_unique<LlmAgent>(
        config, TransportFromEnvironment(config.provider),
        LoadPromptTemplate(prompt_dir.empty() ? DefaultPromptDir() : prompt_dir,
                           *config.prompt_template_id));
  }
  if (config.role == Role::kSeller) {
    return std::make_unique<ScriptedSeller>(*config.scripted_params);
  }
  if (config.role == Role::kBuyer) {
    return std::make_unique<ScriptedBuyer>(*config.scripted_params);
  }
  throw ConfigError("a mediator is not a negotiation agent");
}

std::unique_ptr<Mediator> MakeMediator(const AgentConfig& config,
                                       const std::string& prompt_dir) {
  if (config.backend == Backend::kLlm) {
    config.Validate();
    return std::make_unique<LlmMediator>(
        config, TransportFromEnvironment(config.provider),
        LoadPromptTemplate(prompt_dir.empty() ? DefaultPromptDir() : prompt_dir,
                           *config.prompt_template_id));
  }
  return std::make_unique<RuleMediator>();
}

std::string ArmLabel(Arm arm, std::optional<Emotion> fixed) {
  switch (arm) {
    case Arm::kVanilla:
      return "vanilla";
    case Arm::kFixedEmotion:
      return "fixed:" + std::string(EmotionLabel(fixed.value_or(Emotion::kNeutral)));
    case Arm::kEvoEmo:
      break;
  }
  return "evoemo";
}

std::string_view ArmKindLabel(Arm arm) {
  switch (arm) {
    case Arm::kVanilla:
      return "vanilla";
    case Arm::kFixedEmotion:
      return "fixed_emotion";
    case Arm::kEvoEmo:
      break;
  }
  return "evoemo";
}

Arm ParseArm(std::string_view s) {
  if (s == "vanilla") return Arm::kVanilla;
  if (s == "fixed_emotion") return Arm::kFixedEmotion;
  if (s == "evoemo") return Arm::kEvoEmo;
  throw ParseError("unknown arm '" + std::string(s) + "'");
}

uint64_t PairedSeed(uint64_t root_seed, const std::string& scenario_id,
                    int repetition) {
  return DeriveSeed(root_seed, {HashKey("episode"), HashKey(scenario_id),
                                static_cast<uint64_t>(repetition)});
}

MetricsReport ComputeMetrics(const std::string& arm,
                             const std::vector<EpisodeRecord>& records) {
  MetricsReport report;
  report.arm = arm;
  report.n = static_cast<int>(records.size());
  if (records.empty()) return report;

  std::vector<std::string> order;
  std::map<std::string, std::vector<const EpisodeRecord*>> by_scenario;
  int successes = 0;
  double rounds = 0;
  for (const EpisodeRecord& r : records) {
    if (by_scenario.find(r.scenario_id) == by_scenario.end()) {
      order.push_back(r.scenario_id);
    }
    by_scenario[r.scenario_id].push_back(&r);
    if (r.score.success) ++successes;
    rounds += r.outcome.rounds;
  }
  report.success_rate = 100.0 * successes / records.size();
  report.mean_rounds = rounds / records.size();

  std::vector<double> scenario_means;
  for (const std::string& id : order) {
    ScenarioMetrics s;
    s.scenario_id = id;
    double savings = 0;
    double scenario_rounds = 0;
    for (const EpisodeRecord* r : by_scenario[id]) {
      ++s.n;
      scenario_rounds += r->outcome.rounds;
      if (r->score.success) {
        ++s.successes;
        savings += r->score.savings.value_or(0.0);
      }
    }
    s.mean_rounds = scenario_rounds / s.n;
    if (s.successes > 0) {
      s.mean_savings = 100.0 * savings / s.successes;
      scenario_means.push_back(*s.mean_savings);
    }
    report.per_scenario.push_back(std::move(s));
  }
  const size_t k = scenario_means.size();
  if (k > 0) {
    double mean = 0;
    for (double v : scenario_means) mean += v;
    mean /= k;
    report.mean_savings = mean;
    if (k > 1) {
      double ss = 0;
      for (double v : scenario_means) ss += (v - mean) * (v - mean);
      report.savings_ci95 = kZ95 * std::sqrt(ss / (k - 1)) / std::sqrt(double(k));
    }
  }
  return report;
}

EvolutionRun RunEvolution(const ExperimentConfig& config,
                          const std::vector<Scenario>& scenarios,
                          const std::optional<fs::path>& store_dir, bool resume) {
  if (scenarios.empty()) throw ConfigError("no scenarios");
  std::unique_ptr<NegotiationAgent> buyer = MakeAgent(config.buyer, config.prompt_dir);
  std::unique_ptr<NegotiationAgent> seller = MakeAgent(config.seller, config.prompt_dir);
  std::unique_ptr<Mediator> mediator = MakeMediator(config.mediator, config.prompt_dir);

  EvolutionConfig evolution = config.evolution;
  evolution.root_seed =
      DeriveSeed(config.root_seed, {HashKey("evolution"), config.evolution.root_seed});

  std::optional<EvolutionCheckpoint> checkpoint;
  std::vector<EpisodeRecord> pending;
  fs::path transcripts;
  if (store_dir) {
    EnsureEmptyOrCreate(*store_dir);
    transcripts = *store_dir / "transcripts.jsonl";
    if (resume) {
      const fs::path path = *store_dir / "checkpoint.json";
      if (!fs::exists(path)) throw MissingArtifactError({path.string()});
      checkpoint = Json::parse(ReadFile(path)).get<EvolutionCheckpoint>();
      // Drop training episodes of generations that will be replayed.
      std::vector<EpisodeRecord> kept;
      if (fs::exists(transcripts)) {
        for (const Json& line : ReadJsonLines(transcripts)) {
          EpisodeRecord r = line.get<EpisodeRecord>();
          if (GenerationOfArm(r.arm) < checkpoint->next_generation) {
            kept.push_back(std::move(r));
          }
        }
      }
      WriteFile(transcripts, JoinRecords(kept));
    } else {
      Json snapshot = config;
      snapshot["evolution"] = evolution;
      WriteFile(*store_dir / "config.json", Pretty(snapshot));
      WriteFile(transcripts, "");
      WriteFile(*store_dir / "generations.jsonl", "");
    }
  }

  EvaluationEnv env;
  env.scenarios = scenarios;
  env.buyer = buyer.get();
  env.seller = seller.get();
  env.mediator = mediator.get();
  env.reward = config.reward;
  env.reward.t_max = config.t_max;
  env.t_max = config.t_max;
  env.temperature_override = config.temperature_override;
  if (store_dir) {
    env.episode_sink = [&](int generation, const EmotionPolicy& policy,
                           const Scenario& scenario, int rep,
                           const Episode& episode, const Score& score) {
      pending.push_back({.arm = "generation-" + std::to_string(generation),
                         .scenario_id = scenario.id,
                         .repetition = rep,
                         .transcript = episode.transcript,
                         .outcome = episode.outcome,
                         .score = score,
                         .policy_id = policy.id});
    };
  }

  auto flush = [&](const std::vector<GenerationStats>& generations,
                   size_t already_written) {
    std::string text;
    for (const EpisodeRecord& r : pending) text += DumpLine(Json(r)) + "\n";
    pending.clear();
    std::ofstream(transcripts, std::ios::binary | std::ios::app) << text;
    std::string stats;
    for (size_t i = already_written; i < generations.size(); ++i) {
      stats += DumpLine(Json(generations[i])) + "\n";
    }
    std::ofstream(*store_dir / "generations.jsonl", std::ios::binary | std::ios::app)
        << stats;
  };

  size_t written = checkpoint ? checkpoint->generations.size() : 0;
  if (store_dir && checkpoint) {
    // Rewrite generations.jsonl to match the checkpoint exactly.
    std::string stats;
    for (const GenerationStats& g : checkpoint->generations) {
      stats += DumpLine(Json(g)) + "\n";
    }
    WriteFile(*store_dir / "generations.jsonl", stats);
  }
  CheckpointCallback on_checkpoint;
  if (store_dir) {
    on_checkpoint = [&](const EvolutionCheckpoint& cp) {
      flush(cp.generations, written);
      written = cp.generations.size();
      WriteFile(*store_dir / "checkpoint.json", Pretty(Json(cp)));
    };
  }

  EvolutionRun run = Evolve(evolution, env, on_checkpoint,
                            checkpoint ? &*checkpoint : nullptr);
  if (store_dir) {
    flush(run.generations, written);
    WriteFile(*store_dir / "best_policy.json", Pretty(Json(run.best_policy)));
    WriteFile(*store_dir / "run.json",
              Pretty(Json{{"termination", TerminationLabel(run.reason)},
                          {"generations", run.generations.size()},
                          {"best_fitness", run.best_fitness},
                          {"best_policy_id", run.best_policy.id}}));
  }
  return run;
}

ArmResult RunArm(const ExperimentConfig& config, const std::vector<Scenario>& scenarios,
                 const std::optional<fs::path>& evolution_dir) {
  config.Validate();
  if (scenarios.empty()) throw ConfigError("no scenarios");
  ArmResult result;
  const std::string label = ArmLabel(config.arm, config.fixed_emotion);

  EmotionPlan plan = EmotionPlan::None();
  if (config.arm == Arm::kFixedEmotion) {
    plan = EmotionPlan::Fixed(*config.fixed_emotion);
  } else if (config.arm == Arm::kEvoEmo) {
    result.evolution = RunEvolution(config, scenarios, evolution_dir);
    plan = EmotionPlan::FromPolicy(result.evolution->best_policy,
                                   config.temperature_override);
  }

  std::unique_ptr<NegotiationAgent> buyer = MakeAgent(config.buyer, config.prompt_dir);
  std::unique_ptr<NegotiationAgent> seller = MakeAgent(config.seller, config.prompt_dir);
  std::unique_ptr<Mediator> mediator = MakeMediator(config.mediator, config.prompt_dir);
  RewardConfig reward = config.reward;
  reward.t_max = config.t_max;
  for (const Scenario& scenario : scenarios) {
    for (int rep = 0; rep < config.repetitions; ++rep) {
      const uint64_t seed = PairedSeed(config.root_seed, scenario.id, rep);
      Episode episode =
          RunEpisode(scenario, *buyer, *seller, *mediator, plan, config.t_max, seed);
      CheckConsistent(episode.transcript, episode.outcome, scenario);
      EpisodeRecord record;
      record.arm = label;
      record.scenario_id = scenario.id;
      record.repetition = rep;
      record.score = ScoreOutcome(scenario, episode.outcome, reward);
      record.transcript = std::move(episode.transcript);
      record.outcome = episode.outcome;
      if (plan.policy()) record.policy_id = plan.policy()->id;
      result.records.push_back(std::move(record));
    }
  }
  result.metrics = ComputeMetrics(label, result.records);
  return result;
}

namespace {

// Writes config.json and transcripts.jsonl, then the rendered report.
void WriteArmStore(const fs::path& dir, const Json& config,
                   const std::vector<EpisodeRecord>& records) {
  fs::create_directories(dir);
  WriteFile(dir / "config.json", Pretty(config));
  WriteFile(dir / "transcripts.jsonl", JoinRecords(records));
  WriteReport(dir);
}

void MarkIncomplete(const fs::path& dir, const std::string& error) {
  fs::create_directories(dir);
  WriteFile(dir / "status.json",
            Pretty(Json{{"status", "incomplete"}, {"error", error}}));
}

}  // namespace

ArmResult RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  const std::vector<Scenario> scenarios = LoadConfiguredScenarios(config);
  std::optional<fs::path> dir;
  if (!config.output_dir.empty()) dir = fs::path(config.output_dir);
  try {
    ArmResult result = RunArm(config, scenarios,
                              dir ? std::optional(*dir / "evolution") : std::nullopt);
    if (dir) WriteArmStore(*dir, Json(config), result.records);
    return result;
  } catch (const TransportError& e) {
    if (dir) MarkIncomplete(*dir, e.what());
    throw;
  }
}

std::vector<MetricsReport> RunBenchmark(const ExperimentConfig& base) {
  const std::vector<Scenario> scenarios = LoadConfiguredScenarios(base);
  std::vector<ExperimentConfig> arms;
  ExperimentConfig vanilla = base;
  vanilla.arm = Arm::kVanilla;
  vanilla.fixed_emotion.reset();
  arms.push_back(vanilla);
  for (Emotion e : kAllEmotions) {
    ExperimentConfig fixed = base;
    fixed.arm = Arm::kFixedEmotion;
    fixed.fixed_emotion = e;
    arms.push_back(fixed);
  }
  ExperimentConfig evo = base;
  evo.arm = Arm::kEvoEmo;
  evo.fixed_emotion.reset();
  arms.push_back(evo);

  std::optional<fs::path> dir;
  if (!base.output_dir.empty()) dir = fs::path(base.output_dir);
  std::vector<MetricsReport> reports;
  std::vector<EpisodeRecord> records;
  try {
    for (const ExperimentConfig& arm : arms) {
      ArmResult result = RunArm(
          arm, scenarios,
          dir && arm.arm == Arm::kEvoEmo ? std::optional(*dir / "evolution")
                                         : std::nullopt);
      reports.push_back(result.metrics);
      for (EpisodeRecord& r : result.records) records.push_back(std::move(r));
    }
  } catch (const TransportError& e) {
    if (dir) MarkIncomplete(*dir, e.what());
    throw;
  }
  if (dir) {
    Json config = base;
    config["mode"] = "benchmark";
    WriteArmStore(*dir, config, records);
  }
  return reports;
}

std::string FormatPercent(double fraction) { return Fixed(100.0 * fraction, 1); }

std::string FormatFixed1(double value) { return Fixed(value, 1); }

std::string FormatImprovement(double from, double to, bool lower_is_better) {
  if (from == to || from == 0) return "-";
  double change = (to - from) / from;
  if (lower_is_better) change = -change;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%+.1f%%", 100.0 * change);
  return buf;
}

std::string AblationTable::ToCsv() const {
  std::string out = TableHeader(kind) +
                    ",Buyer's Savings (%),Success Rate (%),Efficiency (rounds)\n";
  for (const AblationRow& row : rows) {
    const MetricsReport& m = row.metrics;
    out += row.label + "," +
           (m.mean_savings ? FormatFixed1(*m.mean_savings) : std::string("NA")) + "," +
           FormatFixed1(m.success_rate) + "," + FormatFixed1(m.mean_rounds) + "\n";
  }
  if (kind == AblationKind::kRewardFormulation && rows.size() == 2) {
    const MetricsReport& weighted = rows[0].metrics;
    const MetricsReport& ratio = rows[1].metrics;
    const std::string savings =
        weighted.mean_savings && ratio.mean_savings
            ? FormatImprovement(*weighted.mean_savings, *ratio.mean_savings)
            : "NA";
    out += "Improv.," + savings + "," +
           FormatImprovement(weighted.success_rate, ratio.success_rate) + "," +
           FormatImprovement(weighted.mean_rounds, ratio.mean_rounds, true) + "\n";
  }
  return out;
}

AblationTable RunAblation(AblationKind kind, const ExperimentConfig& base) {
  const std::vector<Scenario> scenarios = LoadConfiguredScenarios(base);
  struct Variant {
    std::string table_label;
    std::string arm_label;
    ExperimentConfig config;
  };
  std::vector<Variant> variants;
  ExperimentConfig evo = base;
  evo.arm = Arm::kEvoEmo;
  evo.fixed_emotion.reset();
  switch (kind) {
    case AblationKind::kRewardFormulation: {
      ExperimentConfig weighted = evo;
      weighted.reward.formulation = RewardFormulation::kWeighted;
      ExperimentConfig ratio = evo;
      ratio.reward.formulation = RewardFormulation::kRatio;
      variants.push_back({"Weighted (b(S)-e(S))", "reward=weighted", weighted});
      variants.push_back({"Ratio-based (b(S)/e(S))", "reward=ratio", ratio});
      break;
    }
    case AblationKind::kEmotionTemperature:
      for (const char* t : {"0.1", "0.5", "1.0"}) {
        ExperimentConfig c = evo;
        c.temperature_override = std::stod(t);
        variants.push_back({t, std::string("temperature=") + t, c});
      }
      break;
    case AblationKind::kIterations:
      for (int g : {1, 3, 5, 10}) {
        ExperimentConfig c = evo;
        c.evolution.max_generations = g;
        // Every row runs its full generation budget.
        c.evolution.convergence_epsilon = 0;
        variants.push_back(
            {std::to_string(g), "iterations=" + std::to_string(g), c});
      }
      break;
  }

  std::optional<fs::path> dir;
  if (!base.output_dir.empty()) dir = fs::path(base.output_dir);
  AblationTable table;
  table.kind = kind;
  std::vector<EpisodeRecord> records;
  for (Variant& v : variants) {
    std::optional<fs::path> evo_dir;
    if (dir) evo_dir = *dir / "evolution" / v.arm_label;
    ArmResult result = RunArm(v.config, scenarios, evo_dir);
    result.metrics.arm = v.arm_label;
    for (EpisodeRecord& r : result.records) {
      r.arm = v.arm_label;
      records.push_back(std::move(r));
    }
    table.rows.push_back({v.table_label, result.metrics});
  }
  if (dir) {
    Json config = evo;
    config["mode"] = "ablation";
    config["ablation"] = AblationLabel(kind);
    WriteArmStore(*dir, config, records);
    WriteFile(*dir / ("ablation_" + std::string(AblationLabel(kind)) + ".csv"),
              table.ToCsv());
  }
  return table;
}

std::string_view AblationLabel(AblationKind k) {
  switch (k) {
    case AblationKind::kRewardFormulation:
      return "reward_formulation";
    case AblationKind::kEmotionTemperature:
      return "emotion_temperature";
    case AblationKind::kIterations:
      break;
  }
  return "iterations";
}

AblationKind ParseAblationKind(std::string_view s) {
  if (s == "reward_formulation") return AblationKind::kRewardFormulation;
  if (s == "emotion_temperature") return AblationKind::kEmotionTemperature;
  if (s == "iterations") return AblationKind::kIterations;
  throw ParseError("unknown ablation kind '" + std::string(s) + "'");
}

RenderedReport Report(const fs::path& run_dir) {
  std::vector<std::string> missing;
  for (const char* name : {"config.json", "transcripts.jsonl"}) {
    if (!fs::exists(run_dir / name)) missing.push_back((run_dir / name).string());
  }
  if (!missing.empty()) throw MissingArtifactError(std::move(missing));

  std::vector<std::string> order;
  std::map<std::string, std::vector<EpisodeRecord>> by_arm;
  for (const Json& line : ReadJsonLines(run_dir / "transcripts.jsonl")) {
    EpisodeRecord record = line.get<EpisodeRecord>();
    if (by_arm.find(record.arm) == by_arm.end()) order.push_back(record.arm);
    by_arm[record.arm].push_back(std::move(record));
  }

  RenderedReport rendered;
  rendered.table_csv =
      "arm,n,success_rate,mean_savings,savings_ci95,mean_rounds\n";
  Json arms = Json::array();
  for (const std::string& arm : order) {
    MetricsReport m = ComputeMetrics(arm, by_arm[arm]);
    rendered.table_csv += arm + "," + std::to_string(m.n) + "," +
                          Fixed(m.success_rate, 2) + "," +
                          (m.mean_savings ? Fixed(*m.mean_savings, 2) : "NA") + "," +
                          Fixed(m.savings_ci95, 2) + "," + Fixed(m.mean_rounds, 2) +
                          "\n";
    arms.push_back(Json(m));
    rendered.arms.push_back(std::move(m));
  }
  const Json summary{{"ci_method", kCiMethod},
                     {"units", {{"success_rate", "percent"},
                                {"mean_savings", "percent of list price"},
                                {"mean_rounds", "dialogue turns"}}},
                     {"arms", std::move(arms)}};
  rendered.summary_json = Pretty(summary);
  return rendered;
}

RenderedReport WriteReport(const fs::path& run_dir) {
  RenderedReport rendered = Report(run_dir);
  WriteFile(run_dir / "metrics.csv", rendered.table_csv);
  WriteFile(run_dir / "summary.json", rendered.summary_json);
  return rendered;
}

}  // namespace evoemo
