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

#include <algorithm>
#include <cmath>
#include <string>

#include "evoemo/errors.h"

namespace evoemo {

void RewardConfig::Validate() const {
  if (!(alpha > 0)) throw ConfigError("alpha must be positive");
  if (formulation == RewardFormulation::kWeighted) {
    if (!(weighted_beta >= 0)) throw ConfigError("weighted_beta must be >= 0");
    if (t_max < 1) throw ConfigError("t_max must be positive");
  }
}

double Savings(const Scenario& scenario, const Outcome& outcome) {
  if (!outcome.success() || !outcome.final_price) {
    throw UndefinedSavingsError("savings are undefined for a " +
                                std::string(OutcomeLabel(outcome.status)) +
                                " outcome");
  }
  const double b =
      (scenario.list_price - *outcome.final_price) / scenario.list_price;
  return std::clamp(b, 0.0, 1.0);
}

double RatioReward(double savings, int rounds, double alpha) {
  return alpha * savings / rounds;
}

double WeightedReward(double savings, int rounds, double alpha, double beta,
                      int t_max) {
  return std::max(0.0, alpha * (savings - beta * rounds / t_max));
}

double Reward(const Scenario& scenario, const Outcome& outcome,
              const RewardConfig& config) {
  if (!outcome.success()) return 0.0;
  const double b = Savings(scenario, outcome);
  if (outcome.rounds < 1) throw ValidationError("rounds must be positive");
  if (config.formulation == RewardFormulation::kRatio) {
    return RatioReward(b, outcome.rounds, config.alpha);
  }
  return WeightedReward(b, outcome.rounds, config.alpha, config.weighted_beta,
                        config.t_max);
}

Score ScoreOutcome(const Scenario& scenario, const Outcome& outcome,
                   const RewardConfig& config) {
  Score score;
  score.success = outcome.success();
  score.rounds = outcome.rounds;
  if (score.success) score.savings = Savings(scenario, outcome);
  score.reward = Reward(scenario, outcome, config);
  return score;
}

std::string_view FormulationLabel(RewardFormulation f) {
  return f == RewardFormulation::kRatio ? "ratio" : "weighted";
}

RewardFormulation ParseFormulation(std::string_view s) {
  if (s == "ratio") return RewardFormulation::kRatio;
  if (s == "weighted") return RewardFormulation::kWeighted;
  throw ParseError("unknown reward formulation '" + std::string(s) + "'");
}

}  // namespace evoemo
