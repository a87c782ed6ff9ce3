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

#include "evoemo/negotiation.h"

#include <cmath>
#include <utility>

#include "evoemo/errors.h"

namespace evoemo {

Classification RuleMediator::Classify(const Transcript& transcript,
                                      const Scenario& scenario) {
  return evoemo::Classify(transcript.turns, scenario);
}

EmotionPlan EmotionPlan::None() { return EmotionPlan(); }

EmotionPlan EmotionPlan::Fixed(Emotion emotion) {
  EmotionPlan plan;
  plan.kind_ = Kind::kFixed;
  plan.fixed_ = emotion;
  return plan;
}

EmotionPlan EmotionPlan::FromPolicy(EmotionPolicy policy,
                                    std::optional<double> temperature_override) {
  policy.Validate();
  if (temperature_override && !(*temperature_override > 0)) {
    throw ValidationError("temperature override must be positive");
  }
  EmotionPlan plan;
  plan.kind_ = Kind::kPolicy;
  plan.policy_ = std::move(policy);
  plan.temperature_override_ = temperature_override;
  return plan;
}

Episode RunEpisode(const Scenario& scenario, NegotiationAgent& buyer,
                   NegotiationAgent& seller, Mediator& mediator,
                   const EmotionPlan& plan, int t_max, uint64_t seed) {
  if (t_max < 2) throw ValidationError("t_max must be >= 2");
  scenario.Validate();

  Rng emotion_rng(MixSeed(seed, kEmotionStream));
  Rng buyer_rng(MixSeed(seed, kBuyerStream));
  Rng seller_rng(MixSeed(seed, kSellerStream));

  Episode episode;
  episode.transcript.scenario_id = scenario.id;
  episode.transcript.seed = seed;
  std::vector<Turn>& turns = episode.transcript.turns;

  Classification status = Classification::kOngoing;
  int buyer_turns = 0;
  while (static_cast<int>(turns.size()) < t_max &&
         status == Classification::kOngoing) {
    const int index = static_cast<int>(turns.size()) + 1;
    const bool seller_turn = index % 2 == 1;
    const NegotiationState state = StateFromTurns(turns);

    Turn turn;
    turn.index = index;
    AgentReply reply;
    if (seller_turn) {
      turn.speaker = Speaker::kSeller;
      std::optional<Emotion> observed;
      if (!turns.empty() && turns.back().emotion) observed = turns.back().emotion;
      const TurnRequest request{scenario, episode.transcript, state, observed,
                                kDefaultChatTemperature};
      reply = seller.Reply(request, seller_rng);
    } else {
      turn.speaker = Speaker::kBuyer;
      ++buyer_turns;
      std::optional<Emotion> emotion;
      double temperature = kDefaultChatTemperature;
      switch (plan.kind()) {
        case EmotionPlan::Kind::kNone:
          break;
        case EmotionPlan::Kind::kFixed:
          emotion = plan.fixed();
          break;
        case EmotionPlan::Kind::kPolicy: {
          const EmotionPolicy& policy = *plan.policy();
          temperature =
              StepTemperature(policy, buyer_turns, plan.temperature_override());
          const Emotion next =
              buyer_turns == 1
                  ? policy.initial_emotion
                  : SampleNextEmotion(policy, episode.trajectory.back().emotion,
                                      buyer_turns, emotion_rng,
                                      plan.temperature_override());
          episode.trajectory.push_back({buyer_turns, next, temperature});
          emotion = next;
          break;
        }
      }
      const TurnRequest request{scenario, episode.transcript, state, emotion,
                                temperature};
      reply = buyer.Reply(request, buyer_rng);
      turn.emotion = emotion;
    }
    turn.message = std::move(reply.message);
    turn.offer = reply.offer;
    turn.accept = reply.accept;
    turn.walk_away = reply.walk_away;
    turns.push_back(std::move(turn));
    status = mediator.Classify(episode.transcript, scenario);
  }

  Outcome& outcome = episode.outcome;
  outcome.rounds = static_cast<int>(turns.size());
  switch (status) {
    case Classification::kAccepted:
      outcome.status = OutcomeStatus::kAccepted;
      outcome.final_price = AgreedPrice(turns);
      break;
    case Classification::kBreakdown:
      outcome.status = OutcomeStatus::kBreakdown;
      break;
    case Classification::kOngoing:
      outcome.status = OutcomeStatus::kTimeout;
      break;
  }
  return episode;
}

void CheckConsistent(const Transcript& transcript, const Outcome& outcome,
                     const Scenario& scenario) {
  if (transcript.turns.empty()) throw ValidationError("empty transcript");
  ValidateTurns(transcript.turns);
  if (outcome.rounds != static_cast<int>(transcript.turns.size())) {
    throw ValidationError("outcome rounds differ from transcript length");
  }
  if (outcome.success() != outcome.final_price.has_value()) {
    throw ValidationError("final_price must be present iff accepted");
  }
  const Classification c = Classify(transcript.turns, scenario);
  switch (outcome.status) {
    case OutcomeStatus::kAccepted:
      if (c != Classification::kAccepted ||
          AgreedPrice(transcript.turns) != *outcome.final_price) {
        throw ValidationError("accepted outcome disagrees with transcript");
      }
      break;
    case OutcomeStatus::kBreakdown:
      if (c != Classification::kBreakdown) {
        throw ValidationError("breakdown outcome disagrees with transcript");
      }
      break;
    case OutcomeStatus::kTimeout:
      if (c != Classification::kOngoing) {
        throw ValidationError("timeout outcome disagrees with transcript");
      }
      break;
  }
}

}  // namespace evoemo
