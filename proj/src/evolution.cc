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

#include "evoemo/evolution.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "evoemo/errors.h"

namespace evoemo {
namespace {

constexpr double kMixKeep = 0.8;
constexpr double kNoiseSigma = 0.1;
constexpr double kNoiseClip = 0.2;
constexpr uint64_t kCommonSeedTag = 0x636f6d6d6f6e;  // "common"
constexpr int kMaxDuplicateRetries = 10;

Emotion PickAllowed(const GenomeSpace& space, Rng& rng) {
  const std::vector<Emotion> allowed = space.allowed_emotions();
  return allowed[rng.Below(allowed.size())];
}

EmotionRow UniformOverAllowed(const GenomeSpace& space) {
  EmotionRow row{};
  const std::vector<Emotion> allowed = space.allowed_emotions();
  for (Emotion e : allowed) row[EmotionIndex(e)] = 1.0 / allowed.size();
  return space.Project(row);
}

// Confines a freshly drawn policy to the space.
void Confine(EmotionPolicy& policy, const GenomeSpace& space, Rng& rng) {
  if (space.full()) return;
  std::array<EmotionRow, kNumEmotions> rows = policy.matrix.rows();
  for (int i = 0; i < kNumEmotions; ++i) {
    rows[i] = space.allowed[i] ? space.Project(rows[i]) : UniformOverAllowed(space);
  }
  policy.matrix = TransitionMatrix::FromRows(rows);
  policy.initial_emotion = PickAllowed(space, rng);
  if (space.fixed_temperature) policy.temperature = *space.fixed_temperature;
}

double ClippedNoise(Rng& rng) {
  return std::clamp(kNoiseSigma * rng.Normal(), -kNoiseClip, kNoiseClip);
}

bool IsDuplicate(const EmotionPolicy& child, const std::vector<EmotionPolicy>& a,
                 const std::vector<EmotionPolicy>& b) {
  const auto same = [&](const EmotionPolicy& p) { return p.SameGenome(child); };
  return std::any_of(a.begin(), a.end(), same) || std::any_of(b.begin(), b.end(), same);
}

}  // namespace

GenomeSpace GenomeSpace::Restricted(std::span<const Emotion> emotions,
                                    int grid_resolution,
                                    std::optional<TemperatureParams> temperature) {
  GenomeSpace space;
  space.allowed.fill(false);
  for (Emotion e : emotions) space.allowed[EmotionIndex(e)] = true;
  space.grid_resolution = grid_resolution;
  space.fixed_temperature = temperature;
  space.Validate();
  return space;
}

bool GenomeSpace::full() const {
  return std::all_of(allowed.begin(), allowed.end(), [](bool a) { return a; }) &&
         grid_resolution == 0 && !fixed_temperature;
}

std::vector<Emotion> GenomeSpace::allowed_emotions() const {
  std::vector<Emotion> out;
  for (int i = 0; i < kNumEmotions; ++i) {
    if (allowed[i]) out.push_back(static_cast<Emotion>(i));
  }
  return out;
}

EmotionRow GenomeSpace::Project(const EmotionRow& row, Rng* rng) const {
  EmotionRow out{};
  double total = 0;
  for (int j = 0; j < kNumEmotions; ++j) {
    if (allowed[j]) {
      out[j] = std::max(0.0, row[j]);
      total += out[j];
    }
  }
  const std::vector<Emotion> cols = allowed_emotions();
  if (!(total > 0)) {
    for (Emotion e : cols) out[EmotionIndex(e)] = 1.0;
    total = static_cast<double>(cols.size());
  }
  for (double& v : out) v /= total;
  if (grid_resolution <= 0) return out;

  // Rounding onto multiples of 1/grid_resolution: largest remainder, or
  // systematic sampling of the remainders when randomized.
  const int n = grid_resolution;
  std::array<int, kNumEmotions> units{};
  std::array<double, kNumEmotions> remainder{};
  int assigned = 0;
  for (Emotion e : cols) {
    const int j = EmotionIndex(e);
    const double scaled = out[j] * n;
    units[j] = static_cast<int>(std::floor(scaled));
    remainder[j] = scaled - units[j];
    assigned += units[j];
  }
  if (rng != nullptr) {
    // Cell j gains a unit with probability remainder[j], so E[grid] = out.
    double cursor = rng->Uniform();
    double cumulative = 0;
    for (Emotion e : cols) {
      const int j = EmotionIndex(e);
      const double next = cumulative + remainder[j];
      while (cursor < next && assigned < n) {
        ++units[j];
        ++assigned;
        cursor += 1.0;
      }
      cumulative = next;
    }
  }
  std::vector<int> order;
  for (Emotion e : cols) order.push_back(EmotionIndex(e));
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainder[a] > remainder[b]; });
  for (int k = 0; assigned < n; ++k, ++assigned) {
    ++units[order[k % order.size()]];
  }
  EmotionRow grid{};
  for (int j = 0; j < kNumEmotions; ++j) {
    grid[j] = static_cast<double>(units[j]) / n;
  }
  return grid;
}

bool GenomeSpace::Contains(const EmotionPolicy& policy) const {
  if (!allowed[EmotionIndex(policy.initial_emotion)]) return false;
  if (fixed_temperature && !(policy.temperature == *fixed_temperature)) {
    return false;
  }
  for (int i = 0; i < kNumEmotions; ++i) {
    if (!allowed[i]) continue;
    for (int j = 0; j < kNumEmotions; ++j) {
      const double p = policy.matrix.at(i, j);
      if (!allowed[j] && p != 0) return false;
      if (grid_resolution > 0) {
        const double scaled = p * grid_resolution;
        if (std::abs(scaled - std::round(scaled)) > 1e-9) return false;
      }
    }
  }
  return true;
}

void GenomeSpace::Validate() const {
  if (std::none_of(allowed.begin(), allowed.end(), [](bool a) { return a; })) {
    throw ConfigError("genome space allows no emotions");
  }
  if (grid_resolution < 0) throw ConfigError("grid_resolution must be >= 0");
  if (fixed_temperature) fixed_temperature->Validate();
}

int EvolutionConfig::NumElites() const {
  return static_cast<int>(std::ceil(elitism_rate * population_size - 1e-9));
}

void EvolutionConfig::Validate() const {
  if (population_size < 2) throw ConfigError("population_size must be >= 2");
  if (max_generations < 1) throw ConfigError("max_generations must be >= 1");
  if (!(elitism_rate > 0 && elitism_rate < 1)) {
    throw ConfigError("elitism_rate must lie in (0, 1)");
  }
  if (NumElites() < 1) throw ConfigError("ceil(rho * m) must be >= 1");
  if (!(crossover_rate >= 0 && crossover_rate <= 1)) {
    throw ConfigError("crossover_rate must lie in [0, 1]");
  }
  if (!(mutation_rate >= 0 && mutation_rate <= 1)) {
    throw ConfigError("mutation_rate must lie in [0, 1]");
  }
  if (!(selection_lambda > 0)) throw ConfigError("selection_lambda must be > 0");
  if (tournament_size < 1) throw ConfigError("tournament_size must be >= 1");
  if (!(convergence_epsilon >= 0)) {
    throw ConfigError("convergence_epsilon must be >= 0");
  }
  if (convergence_patience < 1) {
    throw ConfigError("convergence_patience must be >= 1");
  }
  if (episodes_per_eval < 1) throw ConfigError("episodes_per_eval must be >= 1");
  space.Validate();
}

std::vector<EmotionPolicy> InitPopulation(const EvolutionConfig& config,
                                          Rng& rng, IdSource& ids) {
  config.Validate();
  std::vector<EmotionPolicy> population;
  population.reserve(config.population_size);
  for (int i = 0; i < config.population_size; ++i) {
    EmotionPolicy policy = RandomPolicy(rng, ids.Next());
    Confine(policy, config.space, rng);
    population.push_back(std::move(policy));
  }
  return population;
}

uint64_t EvaluationSeed(const EvolutionConfig& config, uint64_t policy_id,
                        const std::string& scenario_id, int repetition) {
  const uint64_t rep = static_cast<uint64_t>(repetition);
  const uint64_t root = config.evaluation_seed.value_or(config.root_seed);
  if (config.seeding == EvalSeeding::kCommon) {
    return DeriveSeed(root, {kCommonSeedTag, HashKey(scenario_id), rep});
  }
  return DeriveSeed(root, {policy_id, HashKey(scenario_id), rep});
}

double EvaluatePolicy(const EmotionPolicy& policy, const EvaluationEnv& env,
                      const EvolutionConfig& config, int generation) {
  if (env.scenarios.empty()) throw ConfigError("no scenarios to evaluate on");
  if (!env.buyer || !env.seller || !env.mediator) {
    throw ConfigError("evaluation environment is missing an agent");
  }
  const EmotionPlan plan = EmotionPlan::FromPolicy(policy, env.temperature_override);
  double total = 0;
  int count = 0;
  for (const Scenario& scenario : env.scenarios) {
    for (int rep = 0; rep < config.episodes_per_eval; ++rep) {
      const uint64_t seed = EvaluationSeed(config, policy.id, scenario.id, rep);
      const Episode episode = RunEpisode(scenario, *env.buyer, *env.seller,
                                         *env.mediator, plan, env.t_max, seed);
      const Score score = ScoreOutcome(scenario, episode.outcome, env.reward);
      if (env.episode_sink) {
        env.episode_sink(generation, policy, scenario, rep, episode, score);
      }
      total += score.reward;
      ++count;
    }
  }
  return total / count;
}

GenerationStats Evaluate(std::span<const EmotionPolicy> population,
                         const EvaluationEnv& env,
                         const EvolutionConfig& config, int generation) {
  if (population.empty()) throw ConfigError("empty population");
  GenerationStats stats;
  stats.generation = generation;
  // TODO: evaluate policies concurrently for the LLM backend; agents are
  // shared here, so each worker needs its own agent handles.
  for (const EmotionPolicy& policy : population) {
    stats.policy_ids.push_back(policy.id);
    stats.rewards.push_back(EvaluatePolicy(policy, env, config, generation));
  }
  const auto best = std::max_element(stats.rewards.begin(), stats.rewards.end());
  stats.best_reward = *best;
  stats.best_policy_id = stats.policy_ids[best - stats.rewards.begin()];
  stats.mean_reward =
      std::accumulate(stats.rewards.begin(), stats.rewards.end(), 0.0) /
      stats.rewards.size();
  return stats;
}

std::vector<double> SelectionProbabilities(std::span<const double> rewards,
                                           double lambda) {
  if (rewards.empty()) return {};
  if (!(lambda > 0)) throw ConfigError("selection_lambda must be > 0");
  const double max_reward = *std::max_element(rewards.begin(), rewards.end());
  std::vector<double> p(rewards.size());
  double total = 0;
  for (size_t i = 0; i < rewards.size(); ++i) {
    p[i] = std::exp((rewards[i] - max_reward) / lambda);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

std::vector<uint64_t> SelectParents(const GenerationStats& stats,
                                    const EvolutionConfig& config, int count,
                                    Rng& rng) {
  const size_t n = stats.rewards.size();
  if (n == 0 || stats.policy_ids.size() != n) {
    throw ValidationError("generation stats are incomplete");
  }
  std::vector<uint64_t> parents;
  parents.reserve(count);
  if (config.selection_mode == SelectionMode::kSoftmax) {
    const std::vector<double> p =
        SelectionProbabilities(stats.rewards, config.selection_lambda);
    for (int i = 0; i < count; ++i) {
      parents.push_back(stats.policy_ids[rng.Categorical(p)]);
    }
    return parents;
  }
  for (int i = 0; i < count; ++i) {
    size_t best = rng.Below(n);
    for (int k = 1; k < config.tournament_size; ++k) {
      const size_t c = rng.Below(n);
      if (stats.rewards[c] > stats.rewards[best] ||
          (stats.rewards[c] == stats.rewards[best] && c < best)) {
        best = c;
      }
    }
    parents.push_back(stats.policy_ids[best]);
  }
  return parents;
}

std::pair<EmotionPolicy, EmotionPolicy> Crossover(const EmotionPolicy& a,
                                                  const EmotionPolicy& b,
                                                  double crossover_rate,
                                                  Rng& rng, IdSource& ids) {
  EmotionPolicy first = a;
  EmotionPolicy second = b;
  first.id = ids.Next();
  second.id = ids.Next();
  if (!(rng.Uniform() < crossover_rate)) return {first, second};

  std::array<EmotionRow, kNumEmotions> rows_a = a.matrix.rows();
  std::array<EmotionRow, kNumEmotions> rows_b = b.matrix.rows();
  for (int i = 0; i < kNumEmotions; ++i) {
    if (rng.Bernoulli(0.5)) std::swap(rows_a[i], rows_b[i]);
  }
  if (rng.Bernoulli(0.5)) {
    std::swap(first.temperature.tau0, second.temperature.tau0);
  }
  if (rng.Bernoulli(0.5)) {
    std::swap(first.temperature.delta, second.temperature.delta);
  }
  if (rng.Bernoulli(0.5)) {
    std::swap(first.initial_emotion, second.initial_emotion);
  }
  first.matrix = TransitionMatrix::FromRows(rows_a);
  second.matrix = TransitionMatrix::FromRows(rows_b);
  return {first, second};
}

EmotionPolicy Mutate(const EmotionPolicy& policy, double mutation_rate,
                     Rng& rng, IdSource& ids, const GenomeSpace& space) {
  EmotionPolicy out = policy;
  out.id = ids.Next();
  std::array<EmotionRow, kNumEmotions> rows = policy.matrix.rows();
  for (int i = 0; i < kNumEmotions; ++i) {
    if (!(rng.Uniform() < mutation_rate) || !space.allowed[i]) continue;
    // The fresh draw lives on the allowed emotions only.
    const std::vector<Emotion> support = space.allowed_emotions();
    const std::vector<double> draw = rng.UniformSimplex(support.size());
    EmotionRow fresh{};
    for (size_t j = 0; j < support.size(); ++j) fresh[EmotionIndex(support[j])] = draw[j];
    EmotionRow mixed;
    for (int j = 0; j < kNumEmotions; ++j) {
      mixed[j] = kMixKeep * rows[i][j] + (1.0 - kMixKeep) * fresh[j];
    }
    rows[i] = space.Project(mixed, &rng);
  }
  out.matrix = TransitionMatrix::FromRows(rows);
  if (!space.fixed_temperature) {
    if (rng.Uniform() < mutation_rate) {
      out.temperature.tau0 =
          std::clamp(out.temperature.tau0 + ClippedNoise(rng), kMinTau0, kMaxTau0);
    }
    if (rng.Uniform() < mutation_rate) {
      out.temperature.delta =
          std::clamp(out.temperature.delta + ClippedNoise(rng), 0.0, kMaxDelta);
    }
  }
  if (rng.Uniform() < mutation_rate) {
    out.initial_emotion = PickAllowed(space, rng);
  }
  return out;
}

std::vector<EmotionPolicy> NextPopulation(
    std::span<const EmotionPolicy> population, const GenerationStats& stats,
    const EvolutionConfig& config, Rng& rng, IdSource& ids) {
  const int m = static_cast<int>(population.size());
  if (static_cast<int>(stats.rewards.size()) != m) {
    throw ValidationError("stats do not match the population");
  }
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return stats.rewards[a] > stats.rewards[b];
  });
  const int n_elites = std::min(config.NumElites(), m);

  std::vector<EmotionPolicy> next;
  next.reserve(m);
  for (int i = 0; i < n_elites; ++i) next.push_back(population[order[i]]);

  const int k = m - n_elites;
  if (k == 0) return next;
  std::unordered_map<uint64_t, int> index_of;
  for (int i = 0; i < m; ++i) index_of[population[i].id] = i;
  const std::vector<uint64_t> parents = SelectParents(stats, config, k, rng);

  std::vector<EmotionPolicy> offspring;
  for (int i = 0; static_cast<int>(offspring.size()) < k; i += 2) {
    const EmotionPolicy& a = population[index_of.at(parents[i % k])];
    const EmotionPolicy& b = population[index_of.at(parents[(i + 1) % k])];
    auto [c1, c2] = Crossover(a, b, config.crossover_rate, rng, ids);
    for (const EmotionPolicy& c : {c1, c2}) {
      EmotionPolicy child = Mutate(c, config.mutation_rate, rng, ids, config.space);
      // Re-mutate duplicates so that every generation explores new genomes.
      for (int attempt = 0; attempt < kMaxDuplicateRetries &&
                            IsDuplicate(child, next, offspring);
           ++attempt) {
        child = Mutate(child, config.mutation_rate, rng, ids, config.space);
      }
      offspring.push_back(std::move(child));
    }
  }
  offspring.resize(k);
  for (EmotionPolicy& child : offspring) next.push_back(std::move(child));
  return next;
}

EvolutionRun Evolve(const EvolutionConfig& config, const EvaluationEnv& env,
                    const CheckpointCallback& on_checkpoint,
                    const EvolutionCheckpoint* resume) {
  config.Validate();
  EvolutionRun run;
  run.config = config;

  Rng rng(DeriveSeed(config.root_seed, {HashKey("evolve")}));
  IdSource ids;
  std::vector<EmotionPolicy> population;
  int generation = 0;
  int stagnant = 0;
  bool have_best = false;
  if (resume != nullptr) {
    rng = Rng::FromState(resume->rng_state);
    ids = IdSource(resume->next_id);
    population = resume->population;
    generation = resume->next_generation;
    run.generations = resume->generations;
    run.populations = resume->populations;
    run.best_policy = resume->best_policy;
    run.best_fitness = resume->best_fitness;
    stagnant = resume->stagnant_generations;
    have_best = !run.generations.empty();
  } else {
    population = InitPopulation(config, rng, ids);
  }

  while (true) {
    if (static_cast<int>(population.size()) != config.population_size) {
      throw ValidationError("population size drifted from m");
    }
    GenerationStats stats = Evaluate(population, env, config, generation);
    const double previous_best = run.best_fitness;
    const bool had_best = have_best;
    for (size_t i = 0; i < population.size(); ++i) {
      if (!have_best || stats.rewards[i] > run.best_fitness) {
        have_best = true;
        run.best_fitness = stats.rewards[i];
        run.best_policy = population[i];
      }
    }
    run.generations.push_back(stats);
    run.populations.push_back(population);

    if (had_best) {
      const double improvement = run.best_fitness - previous_best;
      stagnant = improvement < config.convergence_epsilon ? stagnant + 1 : 0;
    }
    if (stagnant >= config.convergence_patience) {
      run.reason = TerminationReason::kConverged;
      break;
    }
    if (static_cast<int>(run.generations.size()) >= config.max_generations) {
      run.reason = TerminationReason::kBudgetExhausted;
      break;
    }

    population = NextPopulation(population, stats, config, rng, ids);
    ++generation;
    if (on_checkpoint) {
      EvolutionCheckpoint checkpoint;
      checkpoint.next_generation = generation;
      checkpoint.population = population;
      checkpoint.generations = run.generations;
      checkpoint.populations = run.populations;
      checkpoint.rng_state = rng.SaveState();
      checkpoint.next_id = ids.peek();
      checkpoint.best_policy = run.best_policy;
      checkpoint.best_fitness = run.best_fitness;
      checkpoint.stagnant_generations = stagnant;
      on_checkpoint(checkpoint);
    }
  }
  return run;
}

std::string_view SelectionModeLabel(SelectionMode m) {
  return m == SelectionMode::kSoftmax ? "softmax" : "tournament";
}

SelectionMode ParseSelectionMode(std::string_view s) {
  if (s == "softmax") return SelectionMode::kSoftmax;
  if (s == "tournament") return SelectionMode::kTournament;
  throw ParseError("unknown selection mode '" + std::string(s) + "'");
}

std::string_view TerminationLabel(TerminationReason r) {
  return r == TerminationReason::kConverged ? "converged" : "budget_exhausted";
}

TerminationReason ParseTermination(std::string_view s) {
  if (s == "converged") return TerminationReason::kConverged;
  if (s == "budget_exhausted") return TerminationReason::kBudgetExhausted;
  throw ParseError("unknown termination reason '" + std::string(s) + "'");
}

std::string_view SeedingLabel(EvalSeeding s) {
  return s == EvalSeeding::kPerPolicy ? "per_policy" : "common";
}

EvalSeeding ParseSeeding(std::string_view s) {
  if (s == "per_policy") return EvalSeeding::kPerPolicy;
  if (s == "common") return EvalSeeding::kCommon;
  throw ParseError("unknown seeding '" + std::string(s) + "'");
}

}  // namespace evoemo
