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

#ifndef EVOEMO_EVOLUTION_H_
#define EVOEMO_EVOLUTION_H_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evoemo/emotion_policy.h"
#include "evoemo/negotiation.h"
#include "evoemo/reward.h"
#include "evoemo/rng.h"
#include "evoemo/scenario.h"

namespace evoemo {

enum class SelectionMode { kSoftmax, kTournament };

// How evaluation episodes are seeded.
//   kPerPolicy: keyed by (policy id, scenario id, repetition). A policy keeps
//               its id when carried over as an elite, so its fitness is stable.
//   kCommon:    keyed by (scenario id, repetition) only, so fitness is a
//               function of the genome alone (common random numbers).
enum class EvalSeeding { kPerPolicy, kCommon };

enum class TerminationReason { kConverged, kBudgetExhausted };

// The part of genome space the search may visit. The default is the full
// space. A restricted space limits the emotions that can be expressed, can
// snap matrix rows to a simplex grid with `grid_resolution` steps, and can pin
// the temperature parameters.
struct GenomeSpace {
  std::array<bool, kNumEmotions> allowed{true, true, true, true,
                                         true, true, true};
  int grid_resolution = 0;  // 0 = continuous
  std::optional<TemperatureParams> fixed_temperature;

  static GenomeSpace Full() { return {}; }
  static GenomeSpace Restricted(std::span<const Emotion> emotions,
                                int grid_resolution,
                                std::optional<TemperatureParams> temperature);

  bool full() const;
  std::vector<Emotion> allowed_emotions() const;
  // Maps a distribution over all emotions onto allowed columns and the grid.
  // With `rng` the grid rounding is randomized and unbiased.
  EmotionRow Project(const EmotionRow& row, Rng* rng = nullptr) const;
  bool Contains(const EmotionPolicy& policy) const;
  void Validate() const;
};

struct EvolutionConfig {
  int population_size = 20;
  int max_generations = 5;
  double elitism_rate = 0.25;
  double crossover_rate = 0.75;
  double mutation_rate = 0.25;
  double selection_lambda = 0.01;
  SelectionMode selection_mode = SelectionMode::kSoftmax;
  int tournament_size = 3;
  double convergence_epsilon = 0.01;
  int convergence_patience = 5;
  int episodes_per_eval = 1;
  uint64_t root_seed = 0;
  // Root of the evaluation episode seeds; root_seed when absent. Lets runs
  // with different operator seeds share one fitness function.
  std::optional<uint64_t> evaluation_seed;
  EvalSeeding seeding = EvalSeeding::kPerPolicy;
  GenomeSpace space;

  // ceil(elitism_rate * population_size).
  int NumElites() const;
  void Validate() const;
};

// Hands out unique policy ids.
class IdSource {
 public:
  explicit IdSource(uint64_t next = 1) : next_(next) {}
  uint64_t Next() { return next_++; }
  uint64_t peek() const { return next_; }

 private:
  uint64_t next_;
};

struct GenerationStats {
  int generation = 0;
  std::vector<uint64_t> policy_ids;
  std::vector<double> rewards;  // fitness, aligned with policy_ids
  double best_reward = 0;
  double mean_reward = 0;
  uint64_t best_policy_id = 0;

  bool operator==(const GenerationStats&) const = default;
};

// Where policies are evaluated.
struct EvaluationEnv {
  std::span<const Scenario> scenarios;
  NegotiationAgent* buyer = nullptr;
  NegotiationAgent* seller = nullptr;
  Mediator* mediator = nullptr;
  RewardConfig reward;
  int t_max = kDefaultMaxTurns;
  std::optional<double> temperature_override;
  // Called for every evaluation episode in deterministic order.
  std::function<void(int generation, const EmotionPolicy&, const Scenario&,
                     int repetition, const Episode&, const Score&)>
      episode_sink;
};

std::vector<EmotionPolicy> InitPopulation(const EvolutionConfig& config,
                                          Rng& rng, IdSource& ids);

uint64_t EvaluationSeed(const EvolutionConfig& config, uint64_t policy_id,
                        const std::string& scenario_id, int repetition);

// Fitness of a single policy: mean reward over episodes_per_eval repetitions
// of every scenario.
double EvaluatePolicy(const EmotionPolicy& policy, const EvaluationEnv& env,
                      const EvolutionConfig& config, int generation = 0);

GenerationStats Evaluate(std::span<const EmotionPolicy> population,
                         const EvaluationEnv& env,
                         const EvolutionConfig& config, int generation);

// exp(r_i / lambda) / sum_j exp(r_j / lambda), computed stably.
std::vector<double> SelectionProbabilities(std::span<const double> rewards,
                                           double lambda);

// Draws `count` parent ids with replacement.
std::vector<uint64_t> SelectParents(const GenerationStats& stats,
                                    const EvolutionConfig& config, int count,
                                    Rng& rng);

// Row-atomic uniform crossover. With probability 1 - crossover_rate the
// offspring copy their parents.
std::pair<EmotionPolicy, EmotionPolicy> Crossover(const EmotionPolicy& a,
                                                  const EmotionPolicy& b,
                                                  double crossover_rate,
                                                  Rng& rng, IdSource& ids);

// Per-gene mutation: rows become 0.8 * row + 0.2 * Dirichlet(1) draw;
// tau0 and delta get N(0, 0.1) noise clipped to +-0.2 then re-clamped;
// the initial emotion is redrawn.
EmotionPolicy Mutate(const EmotionPolicy& policy, double mutation_rate,
                     Rng& rng, IdSource& ids,
                     const GenomeSpace& space = GenomeSpace::Full());

// Domains used when clamping mutated temperature parameters.
inline constexpr double kMinTau0 = 0.1;
inline constexpr double kMaxTau0 = 2.0;
inline constexpr double kMaxDelta = 0.99;

// Elites (top NumElites by fitness, unchanged) followed by mutated offspring
// of selected parents.
std::vector<EmotionPolicy> NextPopulation(
    std::span<const EmotionPolicy> population, const GenerationStats& stats,
    const EvolutionConfig& config, Rng& rng, IdSource& ids);

// State needed to continue a run after a completed generation.
struct EvolutionCheckpoint {
  int next_generation = 0;
  std::vector<EmotionPolicy> population;  // to be evaluated next
  std::vector<GenerationStats> generations;
  std::vector<std::vector<EmotionPolicy>> populations;
  std::string rng_state;
  uint64_t next_id = 1;
  EmotionPolicy best_policy;
  double best_fitness = 0;
  int stagnant_generations = 0;
};

struct EvolutionRun {
  EvolutionConfig config;
  std::vector<GenerationStats> generations;
  // Population evaluated in each generation.
  std::vector<std::vector<EmotionPolicy>> populations;
  EmotionPolicy best_policy;
  double best_fitness = 0;
  TerminationReason reason = TerminationReason::kBudgetExhausted;
};

using CheckpointCallback = std::function<void(const EvolutionCheckpoint&)>;

// Runs evaluate -> elitism -> selection -> crossover -> mutation until the
// best fitness improves by less than convergence_epsilon for
// convergence_patience consecutive generations, or max_generations
// generations have been evaluated. The best policy is the argmax over every
// evaluated policy.
EvolutionRun Evolve(const EvolutionConfig& config, const EvaluationEnv& env,
                    const CheckpointCallback& on_checkpoint = {},
                    const EvolutionCheckpoint* resume = nullptr);

std::string_view SelectionModeLabel(SelectionMode m);
SelectionMode ParseSelectionMode(std::string_view s);
std::string_view TerminationLabel(TerminationReason r);
TerminationReason ParseTermination(std::string_view s);
std::string_view SeedingLabel(EvalSeeding s);
EvalSeeding ParseSeeding(std::string_view s);

}  // namespace evoemo

#endif  // EVOEMO_EVOLUTION_H_
