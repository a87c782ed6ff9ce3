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

#ifndef EVOEMO_AGENTS_H_
#define EVOEMO_AGENTS_H_

#include <array>
#include <optional>
#include <string>

#include "evoemo/emotion.h"
#include "evoemo/rng.h"
#include "evoemo/scenario.h"
#include "evoemo/transcript.h"

namespace evoemo {

enum class Backend { kScripted, kLlm };
enum class Role { kBuyer, kSeller, kMediator };

using EmotionTable = std::array<double, kNumEmotions>;

// Parameters of the scripted bargaining agents.
//
// The seller concedes base_concession * w * (ask - cost) per turn, where w is
// the buyer's expressed emotion weight. Repeating the same emotion habituates
// the seller: after a streak of s turns the weight decays toward the neutral
// weight by habituation^(s - 1). Walk-away risk applies only once an emotion
// has been held for hazard_onset consecutive buyer turns.
struct ScriptedParams {
  double base_concession = 0.1;
  EmotionTable emotion_weights{1, 1, 1, 1, 1, 1, 1};
  EmotionTable breakdown_hazard{0, 0, 0, 0, 0, 0, 0};
  double accept_margin = 0.0;
  // Buyer only: opening offer as a fraction of buyer_target.
  double opening_fraction = 0.8;
  double habituation = 1.0;
  int hazard_onset = 1;

  void Validate() const;
  bool operator==(const ScriptedParams&) const = default;

  // Emotion-sensitive seller calibration: negative emotions raise both the
  // concession and the breakdown risk, positive emotions slow concessions.
  static ScriptedParams DefaultSeller();
  static ScriptedParams DefaultBuyer();
  // Every emotion behaves like neutral.
  static ScriptedParams EmotionBlind(double base_concession);
};

struct AgentConfig {
  Backend backend = Backend::kScripted;
  Role role = Role::kBuyer;
  std::optional<std::string> model_name;
  std::optional<std::string> prompt_template_id;
  std::optional<ScriptedParams> scripted_params;
  // LLM backend: provider key used for the API-key and base-URL variables.
  std::string provider = "openai";
  int max_retries = 2;

  void Validate() const;
  static AgentConfig Scripted(Role role, ScriptedParams params);
};

struct AgentReply {
  std::string message;
  std::optional<double> offer;
  bool accept = false;
  bool walk_away = false;

  bool operator==(const AgentReply&) const = default;
};

// Effective seller concession multiplier for the observed emotion and streak.
double EffectiveWeight(const ScriptedParams& params, Emotion emotion,
                       int streak);

AgentReply ScriptedSellerReply(const NegotiationState& state,
                               const Scenario& scenario,
                               const ScriptedParams& params,
                               Emotion observed_buyer_emotion, Rng& rng);

AgentReply ScriptedBuyerReply(const NegotiationState& state,
                              const Scenario& scenario,
                              const ScriptedParams& params,
                              Emotion assigned_emotion, Rng& rng);

// Everything an agent sees when asked for its next turn.
struct TurnRequest {
  const Scenario& scenario;
  const Transcript& transcript;
  const NegotiationState& state;
  std::optional<Emotion> emotion;  // buyer: assigned; seller: observed
  double temperature = 1.0;
};

class NegotiationAgent {
 public:
  virtual ~NegotiationAgent() = default;
  virtual AgentReply Reply(const TurnRequest& request, Rng& rng) = 0;
};

class ScriptedSeller : public NegotiationAgent {
 public:
  explicit ScriptedSeller(ScriptedParams params);
  AgentReply Reply(const TurnRequest& request, Rng& rng) override;

 private:
  ScriptedParams params_;
};

class ScriptedBuyer : public NegotiationAgent {
 public:
  explicit ScriptedBuyer(ScriptedParams params);
  AgentReply Reply(const TurnRequest& request, Rng& rng) override;

 private:
  ScriptedParams params_;
};

std::string_view BackendLabel(Backend b);
Backend ParseBackend(std::string_view s);
std::string_view RoleLabel(Role r);
Role ParseRole(std::string_view s);

// Rounds to whole cents.
double RoundToCents(double amount);

}  // namespace evoemo

#endif  // EVOEMO_AGENTS_H_
