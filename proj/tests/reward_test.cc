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

#include "evoemo/reward.h"

#include "doctest.h"
#include "evoemo/errors.h"
#include "test_util.h"

namespace evoemo {
namespace {

Outcome Accepted(double price, int rounds) {
  return {.status = OutcomeStatus::kAccepted, .final_price = price, .rounds = rounds};
}

TEST_CASE("savings") {
  const Scenario s = testing::MakeScenario("s", 100, 50, 60);
  CHECK(Savings(s, Accepted(60, 4)) == doctest::Approx(0.40));
  CHECK(Savings(s, Accepted(100, 2)) == 0.0);
  CHECK_THROWS_AS(Savings(s, Outcome{.status = OutcomeStatus::kBreakdown, .rounds = 3}),
                  UndefinedSavingsError);
}

TEST_CASE("reward formulas") {
  CHECK(RatioReward(0.4, 8, 1.0) == doctest::Approx(0.05));
  CHECK(WeightedReward(0.4, 6, 1.0, 1.0, 30) == doctest::Approx(0.2));
  CHECK(WeightedReward(0.1, 30, 1.0, 1.0, 30) == 0.0);
}

TEST_CASE("failures score zero under every configuration") {
  const Scenario s = testing::MakeScenario("s", 100, 50, 60);
  for (OutcomeStatus st : {OutcomeStatus::kBreakdown, OutcomeStatus::kTimeout}) {
    const Outcome o{.status = st, .rounds = 5};
    for (RewardFormulation f : {RewardFormulation::kRatio, RewardFormulation::kWeighted}) {
      RewardConfig c;
      c.formulation = f;
      c.alpha = 3.0;
      CHECK(Reward(s, o, c) == 0.0);
      const Score score = ScoreOutcome(s, o, c);
      CHECK_FALSE(score.success);
      CHECK_FALSE(score.savings.has_value());
    }
  }
}

TEST_CASE("ratio reward monotonicity") {
  for (int e = 2; e < 30; ++e) {
    CHECK(RatioReward(0.3, e, 1.0) > RatioReward(0.3, e + 1, 1.0));
    CHECK(RatioReward(0.31, e, 1.0) > RatioReward(0.3, e, 1.0));
  }
}

TEST_CASE("alpha scale equivariance") {
  const Scenario s = testing::MakeScenario("s", 100, 50, 60);
  for (RewardFormulation f : {RewardFormulation::kRatio, RewardFormulation::kWeighted}) {
    RewardConfig one, three;
    one.formulation = three.formulation = f;
    three.alpha = 3.0;
    for (int rounds = 2; rounds < 20; rounds += 3) {
      const Outcome o = Accepted(70, rounds);
      CHECK(Reward(s, o, three) == doctest::Approx(3.0 * Reward(s, o, one)));
    }
  }
}

TEST_CASE("config validation and labels") {
  RewardConfig c;
  c.alpha = 0;
  CHECK_THROWS(c.Validate());
  c = RewardConfig{};
  c.formulation = RewardFormulation::kWeighted;
  c.t_max = 0;
  CHECK_THROWS(c.Validate());
  CHECK(ParseFormulation(FormulationLabel(RewardFormulation::kWeighted)) ==
        RewardFormulation::kWeighted);
}

}  // namespace
}  // namespace evoemo
