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

#ifndef EVOEMO_NEGOTIATION_H_
#define EVOEMO_NEGOTIATION_H_

#include <cstdint>
#include <optional>

#include "evoemo/agents.h"
#include "evoemo/emotion_policy.h"
#include "evoemo/scenario.h"
#include "evoemo/transcript.h"

namespace evoemo {

class Mediator {
 public:
  virtual ~Mediator() = default;
  virtual Classification Classify(const Transcript& transcript,
                                  const Scenario& scenario) = 0;
};

class RuleMediator : public Mediator {
 public:
  Classification Classify(const Transcript& transcript,
                          const Scenario& scenario) override;
};

// How the buyer's emotion is chosen on each of its turns.
class EmotionPlan {
 public:
  enum class Kind { kNone, kFixed, kPolicy };

  static EmotionPlan None();
  static EmotionPlan Fixed(Emotion emotion);
  static EmotionPlan FromPolicy(
      EmotionPolicy policy, std::optional<double> temperature_override = {});

  Kind kind() const { return kind_; }
  const std::optional<EmotionPolicy>& policy() const { return policy_; }
  std::optional<Emotion> fixed() const { return fixed_; }
  std::optional<double> temperature_override() const {
    return temperature_override_;
  }

 private:
  Kind kind_ = Kind::kNone;
  std::optional<Emotion> fixed_;
  std::optional<EmotionPolicy> policy_;
  std::optional<double> temperature_override_;
};

struct Episode {
  Transcript transcript;
  Outcome outcome;
  EmotionTrajectory trajectory;  // buyer emotions, one entry per buyer turn
};

// Chat temperature for buyer turns without an emotion policy.
inline constexpr double kDefaultChatTemperature = 1.0;

// Stream keys derived from an episode seed.
inline constexpr uint64_t kEmotionStream = 1;
inline constexpr uint64_t kBuyerStream = 2;
inline constexpr uint64_t kSellerStream = 3;

// Plays one negotiation. The seller opens; turns alternate; the mediator
// classifies after every turn; the episode ends on accepted/breakdown or as a
// timeout after t_max turns. Agent TransportError propagates and no outcome is
// produced.
Episode RunEpisode(const Scenario& scenario, NegotiationAgent& buyer,
                   NegotiationAgent& seller, Mediator& mediator,
                   const EmotionPlan& plan, int t_max, uint64_t seed);

// Throws ValidationError if transcript and outcome disagree.
void CheckConsistent(const Transcript& transcript, const Outcome& outcome,
                     const Scenario& scenario);

}  // namespace evoemo

#endif  // EVOEMO_NEGOTIATION_H_
