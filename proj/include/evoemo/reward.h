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

#ifndef EVOEMO_REWARD_H_
#define EVOEMO_REWARD_H_

#include <optional>
#include <string_view>

#include "evoemo/scenario.h"
#include "evoemo/transcript.h"

namespace evoemo {

enum class RewardFormulation { kRatio, kWeighted };

struct RewardConfig {
  double alpha = 1.0;
  RewardFormulation formulation = RewardFormulation::kRatio;
  double weighted_beta = 1.0;  // weighted only
  int t_max = kDefaultMaxTurns;  // weighted only: normalizes rounds

  void Validate() const;
};

struct Score {
  bool success = false;
  std::optional<double> savings;  // accepted outcomes only
  int rounds = 0;
  double reward = 0;

  bool operator==(const Score&) const = default;
};

// (list_price - final_price) / list_price clamped to [0, 1]. Throws
// UndefinedSavingsError unless the outcome is accepted.
double Savings(const Scenario& scenario, const Outcome& outcome);

// alpha * savings / rounds.
double RatioReward(double savings, int rounds, double alpha);
// max(0, alpha * (savings - beta * rounds / t_max)).
double WeightedReward(double savings, int rounds, double alpha, double beta,
                      int t_max);

// Zero for every non-accepted outcome.
double Reward(const Scenario& scenario, const Outcome& outcome,
              const RewardConfig& config);

Score ScoreOutcome(const Scenario& scenario, const Outcome& outcome,
                   const RewardConfig& config);

std::string_view FormulationLabel(RewardFormulation f);
RewardFormulation ParseFormulation(std::string_view s);

}  // namespace evoemo

#endif  // EVOEMO_REWARD_H_
