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

#ifndef EVOEMO_HARNESS_H_
#define EVOEMO_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evoemo/agents.h"
#include "evoemo/emotion.h"
#include "evoemo/evolution.h"
#include "evoemo/negotiation.h"
#include "evoemo/reward.h"
#include "evoemo/scenario.h"

namespace evoemo {

enum class Arm { kVanilla, kFixedEmotion, kEvoEmo };

struct ExperimentConfig {
  Arm arm = Arm::kVanilla;
  std::optional<Emotion> fixed_emotion;
  AgentConfig buyer = AgentConfig::Scripted(Role::kBuyer,
                                            ScriptedParams::DefaultBuyer());
  AgentConfig seller = AgentConfig::Scripted(Role::kSeller,
                                             ScriptedParams::DefaultSeller());
  AgentConfig mediator{.backend = Backend::kScripted, .role = Role::kMediator};
  std::string scenario_path;
  // Restricts the loaded scenarios to these ids; empty keeps all of them.
  std::vector<std::string> scenario_ids;
  int t_max = kDefaultMaxTurns;
  EvolutionConfig evolution;
  RewardConfig reward;
  int repetitions = 5;
  uint64_t root_seed = 0;
  std::string output_dir;
  // Overrides the temperature schedule of every emotion policy.
  std::optional<double> temperature_override;
  std::string prompt_dir;  // empty = bundled prompts

  void Validate() const;
};

// One stored episode of an experiment arm.
struct EpisodeRecord {
  std::string arm;
  std::string scenario_id;
  int repetition = 0;
  Transcript transcript;
  Outcome outcome;
  Score score;
  std::optional<uint64_t> policy_id;

  bool operator==(const EpisodeRecord&) const = default;
};

struct ScenarioMetrics {
  std::string scenario_id;
  int n = 0;
  int successes = 0;
  std::optional<double> mean_savings;  // percent; absent without successes
  double mean_rounds = 0;
};

// Percentages are in [0, 100]. mean_savings is the mean of per-scenario mean
// savings over scenarios with at least one success; its 95% interval is the
// normal approximation 1.96 * sd / sqrt(k) over those k scenario means.
struct MetricsReport {
  std::string arm;
  int n = 0;
  double success_rate = 0;
  std::optional<double> mean_savings;
  double savings_ci95 = 0;
  double mean_rounds = 0;
  std::vector<ScenarioMetrics> per_scenario;
};

MetricsReport ComputeMetrics(const std::string& arm,
                             const std::vector<EpisodeRecord>& records);

std::string ArmLabel(Arm arm, std::optional<Emotion> fixed);
std::string_view ArmKindLabel(Arm arm);
Arm ParseArm(std::string_view s);

// Seed shared by every arm for (scenario, repetition), so arms are paired.
uint64_t PairedSeed(uint64_t root_seed, const std::string& scenario_id,
                    int repetition);

struct ArmResult {
  MetricsReport metrics;
  std::vector<EpisodeRecord> records;
  std::optional<EvolutionRun> evolution;
};

std::string DefaultScenarioPath();
std::vector<Scenario> LoadConfiguredScenarios(const ExperimentConfig& config);

std::unique_ptr<NegotiationAgent> MakeAgent(const AgentConfig& config,
                                            const std::string& prompt_dir);
std::unique_ptr<Mediator> MakeMediator(const AgentConfig& config,
                                       const std::string& prompt_dir);

// Evolves a policy with the configured agents. With `store_dir` the run
// store is written there: config.json, generations.jsonl, checkpoint.json,
// best_policy.json, run.json and transcripts.jsonl (training episodes, arm
// "generation-<g>"). With `resume` the run continues from checkpoint.json.
EvolutionRun RunEvolution(const ExperimentConfig& config,
                          const std::vector<Scenario>& scenarios,
                          const std::optional<std::filesystem::path>& store_dir,
                          bool resume = false);

// Runs one arm over the configured scenarios and repetitions. The evoemo arm
// first evolves a policy on the scenarios, then plays its best policy.
ArmResult RunArm(const ExperimentConfig& config,
                 const std::vector<Scenario>& scenarios,
                 const std::optional<std::filesystem::path>& evolution_dir = {});

// Runs one arm and, when output_dir is set, writes the run store.
ArmResult RunExperiment(const ExperimentConfig& config);

// Vanilla, every fixed emotion and evoemo on paired seeds.
std::vector<MetricsReport> RunBenchmark(const ExperimentConfig& base);

enum class AblationKind { kRewardFormulation, kEmotionTemperature, kIterations };

struct AblationRow {
  std::string label;
  MetricsReport metrics;
};

struct AblationTable {
  AblationKind kind = AblationKind::kRewardFormulation;
  std::vector<AblationRow> rows;

  // Comma-separated table; the reward-formulation table ends with an
  // "Improv." row comparing ratio against weighted.
  std::string ToCsv() const;
};

AblationTable RunAblation(AblationKind kind, const ExperimentConfig& base);

std::string_view AblationLabel(AblationKind k);
AblationKind ParseAblationKind(std::string_view s);

// Rendering helpers shared by reports and ablation tables.
std::string FormatPercent(double fraction);  // 0.394 -> "39.4"
std::string FormatFixed1(double value);      // one decimal place
// Relative change (to - from) / from as a signed percentage, "-" when equal.
// With lower_is_better the sign is flipped so that a reduction is positive.
std::string FormatImprovement(double from, double to,
                              bool lower_is_better = false);

struct RenderedReport {
  std::string table_csv;     // one row per arm
  std::string summary_json;  // machine-readable summary document
  std::vector<MetricsReport> arms;
};

// Recomputes every arm's metrics from the transcript store of a run
// directory. Throws MissingArtifactError listing absent files.
RenderedReport Report(const std::filesystem::path& run_dir);

// Calls Report and writes metrics.csv and summary.json into the run.
RenderedReport WriteReport(const std::filesystem::path& run_dir);

}  // namespace evoemo

#endif  // EVOEMO_HARNESS_H_
