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

#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "doctest.h"
#include "evoemo/agents.h"
#include "evoemo/errors.h"
#include "evoemo/negotiation.h"
#include "evoemo/reward.h"
#include "test_util.h"

namespace evoemo {
namespace {

void CheckStochastic(const EmotionPolicy& p) {
  for (const EmotionRow& row : p.matrix.rows()) {
    double sum = 0;
    for (double v : row) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
}

EmotionPolicy Absorbing(Emotion target, uint64_t id) {
  EmotionRow row{};
  row[EmotionIndex(target)] = 1.0;
  std::array<EmotionRow, kNumEmotions> rows;
  rows.fill(row);
  EmotionPolicy p;
  p.id = id;
  p.initial_emotion = target;
  p.matrix = TransitionMatrix::FromRows(rows);
  return p;
}

struct Harness {
  std::vector<Scenario> scenarios{testing::MakeScenario("a", 100, 50, 60),
                                  testing::MakeScenario("b", 800, 500, 550)};
  ScriptedBuyer buyer{ScriptedParams::DefaultBuyer()};
  ScriptedSeller seller;
  RuleMediator mediator;
  EvaluationEnv env;

  explicit Harness(ScriptedParams seller_params = ScriptedParams::DefaultSeller())
      : seller(seller_params) {
    env.scenarios = scenarios;
    env.buyer = &buyer;
    env.seller = &seller;
    env.mediator = &mediator;
  }
};

EvolutionConfig SmallConfig() {
  EvolutionConfig c;
  c.population_size = 6;
  c.max_generations = 4;
  c.convergence_epsilon = 0;
  c.root_seed = 3;
  return c;
}

TEST_CASE("init population") {
  EvolutionConfig c;
  c.population_size = 10;
  Rng rng(1);
  IdSource ids;
  const std::vector<EmotionPolicy> pop = InitPopulation(c, rng, ids);
  REQUIRE(pop.size() == 10);
  std::set<uint64_t> seen;
  for (const EmotionPolicy& p : pop) {
    CheckStochastic(p);
    seen.insert(p.id);
  }
  CHECK(seen.size() == 10);

  Rng again(1);
  IdSource ids2;
  CHECK(InitPopulation(c, again, ids2) == pop);

  c.population_size = 1;
  CHECK_THROWS_AS(InitPopulation(c, rng, ids), ConfigError);
}

TEST_CASE("single policy fitness equals its episode reward") {
  Harness h;
  h.env.scenarios = std::span<const Scenario>(h.scenarios.data(), 1);
  EvolutionConfig c = SmallConfig();
  Rng rng(4);
  const EmotionPolicy p = RandomPolicy(rng, 12);
  const double fitness = EvaluatePolicy(p, h.env, c);
  const uint64_t seed = EvaluationSeed(c, p.id, "a", 0);
  const Episode ep = RunEpisode(h.scenarios[0], h.buyer, h.seller, h.mediator,
                                EmotionPlan::FromPolicy(p), kDefaultMaxTurns, seed);
  CHECK(fitness == Reward(h.scenarios[0], ep.outcome, h.env.reward));
}

TEST_CASE("certain breakdown gives zero fitness") {
  ScriptedParams doom = ScriptedParams::DefaultSeller();
  doom.breakdown_hazard.fill(0.999);
  doom.hazard_onset = 1;
  Harness h(doom);
  EvolutionConfig c = SmallConfig();
  Rng rng(5);
  IdSource ids;
  const std::vector<EmotionPolicy> pop = InitPopulation(c, rng, ids);
  const GenerationStats a = Evaluate(pop, h.env, c, 0);
  const GenerationStats b = Evaluate(pop, h.env, c, 0);
  CHECK(a == b);
  for (double r : a.rewards) CHECK(r == 0.0);
}

TEST_CASE("selection probabilities") {
  const std::vector<double> equal{0.3, 0.3};
  const std::vector<double> p = SelectionProbabilities(equal, 1.0);
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(0.5));
  const std::vector<double> ln2{0.0, std::log(2.0)};
  const std::vector<double> q = SelectionProbabilities(ln2, 1.0);
  CHECK(q[0] == doctest::Approx(1.0 / 3));
  CHECK(q[1] == doctest::Approx(2.0 / 3));
  // Large rewards stay finite.
  const std::vector<double> big{1000.0, 1001.0};
  const std::vector<double> r = SelectionProbabilities(big, 0.001);
  CHECK(r[1] == doctest::Approx(1.0));
}

TEST_CASE("huge lambda selects uniformly") {
  GenerationStats stats;
  stats.policy_ids = {1, 2, 3, 4};
  stats.rewards = {0.0, 0.1, 0.5, 0.9};
  EvolutionConfig c;
  c.selection_lambda = 1e6;
  Rng rng(6);
  const int n = 100000;
  const std::vector<uint64_t> parents = SelectParents(stats, c, n, rng);
  std::vector<int> counts(5, 0);
  for (uint64_t id : parents) ++counts[id];
  for (int i = 1; i <= 4; ++i) CHECK(std::abs(counts[i] / double(n) - 0.25) <= 0.01);
}

TEST_CASE("tournament selection favors fitter policies") {
  GenerationStats stats;
  stats.policy_ids = {1, 2};
  stats.rewards = {0.0, 1.0};
  EvolutionConfig c;
  c.selection_mode = SelectionMode::kTournament;
  c.tournament_size = 3;
  Rng rng(6);
  int best = 0;
  for (uint64_t id : SelectParents(stats, c, 10000, rng)) best += id == 2;
  // P(best in a 3-draw tournament) = 1 - (1/2)^3.
  CHECK(std::abs(best / 10000.0 - 0.875) < 0.02);
}

TEST_CASE("crossover") {
  Rng rng(7);
  IdSource ids(100);
  const EmotionPolicy a = RandomPolicy(rng, 1);
  const EmotionPolicy b = RandomPolicy(rng, 2);

  SUBCASE("p_c = 0 copies the parents") {
    const auto [x, y] = Crossover(a, b, 0.0, rng, ids);
    CHECK(x.SameGenome(a));
    CHECK(y.SameGenome(b));
    CHECK(x.id != a.id);
  }
  SUBCASE("identical parents") {
    for (int i = 0; i < 50; ++i) {
      const auto [x, y] = Crossover(a, a, 1.0, rng, ids);
      CHECK(x.SameGenome(a));
      CHECK(y.SameGenome(a));
    }
  }
  SUBCASE("rows are exchanged atomically") {
    const EmotionPolicy anger = Absorbing(Emotion::kAnger, 3);
    const EmotionPolicy neutral = Absorbing(Emotion::kNeutral, 4);
    for (int i = 0; i < 50; ++i) {
      const auto [x, y] = Crossover(anger, neutral, 1.0, rng, ids);
      for (int r = 0; r < kNumEmotions; ++r) {
        const bool x_from_a = x.matrix.row(r) == anger.matrix.row(r);
        CHECK((x_from_a || x.matrix.row(r) == neutral.matrix.row(r)));
        // The sibling holds the other parent's row.
        CHECK(y.matrix.row(r) == (x_from_a ? neutral : anger).matrix.row(r));
      }
    }
  }
}

TEST_CASE("mutation") {
  Rng rng(8);
  IdSource ids(100);
  const EmotionPolicy p = RandomPolicy(rng, 1);

  SUBCASE("p_m = 0 is the identity") {
    const EmotionPolicy m = Mutate(p, 0.0, rng, ids);
    CHECK(m.SameGenome(p));
    CHECK(m.id != p.id);
  }
  SUBCASE("rows stay stochastic") {
    EmotionPolicy cur = p;
    for (int i = 0; i < 10000; ++i) {
      cur = Mutate(cur, 1.0, rng, ids);
      for (const EmotionRow& row : cur.matrix.rows()) {
        double sum = 0;
        for (double v : row) sum += v;
        REQUIRE(std::abs(sum - 1.0) < 1e-9);
      }
    }
    CHECK_NOTHROW(cur.Validate());
  }
  SUBCASE("delta stays below one") {
    EmotionPolicy high = p;
    high.temperature.delta = 0.95;
    for (int i = 0; i < 1000; ++i) {
      const EmotionPolicy m = Mutate(high, 1.0, rng, ids);
      CHECK(m.temperature.delta < 1.0);
      CHECK(m.temperature.delta >= 0.0);
      CHECK(m.temperature.tau0 >= kMinTau0);
      CHECK(m.temperature.tau0 <= kMaxTau0);
    }
  }
}

TEST_CASE("restricted space stays closed under the operators") {
  const std::array<Emotion, 3> allowed{Emotion::kAnger, Emotion::kSadness,
                                       Emotion::kNeutral};
  const GenomeSpace space = GenomeSpace::Restricted(allowed, 20, std::nullopt);
  EvolutionConfig c = SmallConfig();
  c.space = space;
  Rng rng(9);
  IdSource ids;
  std::vector<EmotionPolicy> pop = InitPopulation(c, rng, ids);
  for (int i = 0; i < 500; ++i) {
    const EmotionPolicy& a = pop[rng.Below(pop.size())];
    const EmotionPolicy& b = pop[rng.Below(pop.size())];
    auto [x, y] = Crossover(a, b, 1.0, rng, ids);
    const EmotionPolicy m = Mutate(x, 0.5, rng, ids, space);
    CHECK(space.Contains(m));
    pop[rng.Below(pop.size())] = m;
  }
}

TEST_CASE("termination") {
  Harness h;
  SUBCASE("infinite epsilon converges after patience + 1 generations") {
    for (int patience : {1, 2, 3}) {
      EvolutionConfig c = SmallConfig();
      c.convergence_epsilon = std::numeric_limits<double>::infinity();
      c.convergence_patience = patience;
      c.max_generations = 10;
      const EvolutionRun run = Evolve(c, h.env);
      CHECK(run.reason == TerminationReason::kConverged);
      CHECK(run.generations.size() == size_t(patience + 1));
    }
  }
  SUBCASE("one generation exhausts the budget") {
    EvolutionConfig c = SmallConfig();
    c.max_generations = 1;
    const EvolutionRun run = Evolve(c, h.env);
    CHECK(run.reason == TerminationReason::kBudgetExhausted);
    CHECK(run.generations.size() == 1);
  }
}

TEST_CASE("evolution is deterministic and populations keep their size") {
  Harness h;
  const EvolutionConfig c = SmallConfig();
  const EvolutionRun a = Evolve(c, h.env);
  const EvolutionRun b = Evolve(c, h.env);
  CHECK(a.generations == b.generations);
  CHECK(a.best_policy == b.best_policy);
  CHECK(a.best_fitness == b.best_fitness);
  for (const auto& pop : a.populations) {
    CHECK(pop.size() == size_t(c.population_size));
    for (const EmotionPolicy& p : pop) CheckStochastic(p);
  }
  double best = 0;
  for (const GenerationStats& g : a.generations) best = std::max(best, g.best_reward);
  CHECK(a.best_fitness == best);
}

TEST_CASE("resuming from a checkpoint reproduces the run") {
  Harness h;
  const EvolutionConfig c = SmallConfig();
  std::vector<EvolutionCheckpoint> checkpoints;
  const EvolutionRun full =
      Evolve(c, h.env, [&](const EvolutionCheckpoint& cp) { checkpoints.push_back(cp); });
  REQUIRE(checkpoints.size() >= 2);
  const EvolutionRun resumed = Evolve(c, h.env, {}, &checkpoints[1]);
  CHECK(resumed.generations == full.generations);
  CHECK(resumed.best_policy == full.best_policy);
  CHECK(resumed.best_fitness == full.best_fitness);
  CHECK(resumed.reason == full.reason);
}

TEST_CASE("elites survive unchanged") {
  ScriptedParams calm = ScriptedParams::DefaultSeller();
  calm.breakdown_hazard.fill(0.0);
  Harness h(calm);
  EvolutionConfig c = SmallConfig();
  c.seeding = EvalSeeding::kCommon;
  c.max_generations = 6;
  const EvolutionRun run = Evolve(c, h.env);
  for (size_t g = 1; g < run.generations.size(); ++g) {
    CHECK(run.generations[g].best_reward >= run.generations[g - 1].best_reward);
  }
}

TEST_CASE("config validation") {
  EvolutionConfig c;
  CHECK_NOTHROW(c.Validate());
  c.elitism_rate = 0;
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  c = EvolutionConfig{};
  c.selection_lambda = 0;
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  c = EvolutionConfig{};
  c.max_generations = 0;
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  c = EvolutionConfig{};
  CHECK(c.NumElites() == 5);
}

}  // namespace
}  // namespace evoemo
