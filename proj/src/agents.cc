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

#include "evoemo/agents.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "evoemo/errors.h"

namespace evoemo {
namespace {

std::string Money(double amount) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "$%.2f", amount);
  return buf;
}

std::string_view BuyerTone(Emotion e) {
  switch (e) {
    case Emotion::kAnger:
      return "Frankly, this price is outrageous.";
    case Emotion::kDisgust:
      return "Honestly, that asking price is off-putting.";
    case Emotion::kFear:
      return "I'm worried I can't stretch my budget that far.";
    case Emotion::kHappiness:
      return "I really love this, it's exactly what I wanted!";
    case Emotion::kSadness:
      return "Money is tight for me right now, sadly.";
    case Emotion::kSurprise:
      return "Wow, I didn't expect it to be priced like that!";
    case Emotion::kNeutral:
      break;
  }
  return "";
}

std::string WithTone(Emotion e, const std::string& text) {
  const std::string_view tone = BuyerTone(e);
  if (tone.empty()) return text;
  return std::string(tone) + " " + text;
}

void CheckTable(const EmotionTable& table, double lo, double hi,
                bool hi_inclusive, const char* name) {
  for (int i = 0; i < kNumEmotions; ++i) {
    const double v = table[i];
    const bool ok = v >= lo && (hi_inclusive ? v <= hi : v < hi);
    if (!ok) {
      throw ValidationError(std::string(name) + "[" +
                            std::string(EmotionLabel(EmotionFromIndex(i))) +
                            "] out of range: " + std::to_string(v));
    }
  }
}

int StreakIncluding(const NegotiationState& state, Emotion e) {
  if (state.buyer_emotion_streak > 0 && state.buyer_emotion == e) {
    return state.buyer_emotion_streak;
  }
  return 1;
}

}  // namespace

void ScriptedParams::Validate() const {
  if (!(base_concession > 0 && base_concession <= 0.5)) {
    throw ValidationError("base_concession must lie in (0, 0.5]");
  }
  CheckTable(emotion_weights, 0, INFINITY, false, "emotion_weights");
  CheckTable(breakdown_hazard, 0, 1, false, "breakdown_hazard");
  if (!(accept_margin >= 0)) {
    throw ValidationError("accept_margin must be non-negative");
  }
  if (!(opening_fraction > 0 && opening_fraction <= 1)) {
    throw ValidationError("opening_fraction must lie in (0, 1]");
  }
  if (!(habituation >= 0 && habituation <= 1)) {
    throw ValidationError("habituation must lie in [0, 1]");
  }
  if (hazard_onset < 1) throw ValidationError("hazard_onset must be >= 1");
}

ScriptedParams ScriptedParams::DefaultSeller() {
  ScriptedParams p;
  p.base_concession = 0.12;
  //                  anger disgust fear happy sad  surpr neutral
  p.emotion_weights = {1.8, 1.7, 1.3, 0.7, 2.0, 0.8, 1.0};
  p.breakdown_hazard = {0.10, 0.08, 0.04, 0.0, 0.06, 0.0, 0.0};
  p.accept_margin = 0.02;
  p.habituation = 0.5;
  p.hazard_onset = 2;
  return p;
}

ScriptedParams ScriptedParams::DefaultBuyer() {
  ScriptedParams p;
  p.base_concession = 0.15;
  p.accept_margin = 0.0;
  p.opening_fraction = 0.8;
  return p;
}

ScriptedParams ScriptedParams::EmotionBlind(double base_concession) {
  ScriptedParams p;
  p.base_concession = base_concession;
  return p;
}

void AgentConfig::Validate() const {
  if (backend == Backend::kLlm) {
    if (!model_name || model_name->empty()) {
      throw ConfigError("llm backend requires model_name");
    }
    if (!prompt_template_id || prompt_template_id->empty()) {
      throw ConfigError("llm backend requires prompt_template_id");
    }
  } else if (role != Role::kMediator) {
    if (!scripted_params) {
      throw ConfigError("scripted backend requires scripted_params");
    }
    scripted_params->Validate();
  }
  if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
}

AgentConfig AgentConfig::Scripted(Role role, ScriptedParams params) {
  AgentConfig config;
  config.backend = Backend::kScripted;
  config.role = role;
  config.scripted_params = params;
  return config;
}

double RoundToCents(double amount) { return std::round(amount * 100.0) / 100.0; }

double EffectiveWeight(const ScriptedParams& params, Emotion emotion,
                       int streak) {
  const double baseline = params.emotion_weights[EmotionIndex(Emotion::kNeutral)];
  const double raw = params.emotion_weights[EmotionIndex(emotion)];
  return baseline +
         (raw - baseline) * std::pow(params.habituation, std::max(0, streak - 1));
}

AgentReply ScriptedSellerReply(const NegotiationState& state,
                               const Scenario& scenario,
                               const ScriptedParams& params,
                               Emotion observed_buyer_emotion, Rng& rng) {
  if (!state.seller_ask) {
    return {.message = "Hi! The " + scenario.title + " is available for " +
                       Money(scenario.list_price) + ".",
            .offer = scenario.list_price};
  }
  const double previous = *state.seller_ask;
  const int streak = StreakIncluding(state, observed_buyer_emotion);
  const double weight = EffectiveWeight(params, observed_buyer_emotion, streak);
  const double concession =
      params.base_concession * weight * std::max(0.0, previous - scenario.cost_price);
  const double ask = std::min(
      previous, std::max(scenario.cost_price, RoundToCents(previous - concession)));

  // Always drawn so that the stream does not depend on the branch taken.
  const double u = rng.Uniform();

  if (state.buyer_offer && *state.buyer_offer >= scenario.cost_price &&
      *state.buyer_offer >= (1.0 - params.accept_margin) * ask) {
    return {.message = "Deal, " + Money(*state.buyer_offer) + " works for me.",
            .accept = true};
  }
  if (streak >= params.hazard_onset &&
      u < params.breakdown_hazard[EmotionIndex(observed_buyer_emotion)]) {
    return {.message = "I don't think we can make this work. Good luck.",
            .walk_away = true};
  }
  return {.message = "I can do " + Money(ask) + ".", .offer = ask};
}

AgentReply ScriptedBuyerReply(const NegotiationState& state,
                              const Scenario& scenario,
                              const ScriptedParams& params,
                              Emotion assigned_emotion, Rng& rng) {
  if (!state.seller_ask) {
    throw ValidationError("buyer cannot reply before the seller's opening ask");
  }
  const double ask = *state.seller_ask;
  const double u = rng.Uniform();

  if (ask <= scenario.buyer_target * (1.0 + params.accept_margin)) {
    return {.message = WithTone(assigned_emotion,
                                "OK, I'll take it at " + Money(ask) + "."),
            .accept = true};
  }
  int streak = 1;
  if (state.buyer_emotion_streak > 0 && state.buyer_emotion == assigned_emotion) {
    streak = state.buyer_emotion_streak + 1;
  }
  if (streak >= params.hazard_onset &&
      u < params.breakdown_hazard[EmotionIndex(assigned_emotion)]) {
    return {.message = WithTone(assigned_emotion, "I'll look elsewhere."),
            .walk_away = true};
  }
  double offer;
  if (!state.buyer_offer) {
    offer = RoundToCents(scenario.buyer_target * params.opening_fraction);
  } else {
    const double previous = *state.buyer_offer;
    const double weight = params.emotion_weights[EmotionIndex(assigned_emotion)];
    offer = std::max(previous,
                     RoundToCents(previous + params.base_concession * weight *
                                                 std::max(0.0, ask - previous)));
  }
  offer = std::min(offer, ask);
  return {.message = WithTone(assigned_emotion,
                              "Would you take " + Money(offer) + "?"),
          .offer = offer};
}

ScriptedSeller::ScriptedSeller(ScriptedParams params) : params_(params) {
  params_.Validate();
}

AgentReply ScriptedSeller::Reply(const TurnRequest& request, Rng& rng) {
  return ScriptedSellerReply(request.state, request.scenario, params_,
                             request.emotion.value_or(Emotion::kNeutral), rng);
}

ScriptedBuyer::ScriptedBuyer(ScriptedParams params) : params_(params) {
  params_.Validate();
}

AgentReply ScriptedBuyer::Reply(const TurnRequest& request, Rng& rng) {
  return ScriptedBuyerReply(request.state, request.scenario, params_,
                            request.emotion.value_or(Emotion::kNeutral), rng);
}

std::string_view BackendLabel(Backend b) {
  return b == Backend::kLlm ? "llm" : "scripted";
}

Backend ParseBackend(std::string_view s) {
  if (s == "scripted") return Backend::kScripted;
  if (s == "llm") return Backend::kLlm;
  throw ParseError("unknown backend '" + std::string(s) + "'");
}

std::string_view RoleLabel(Role r) {
  switch (r) {
    case Role::kBuyer:
      return "buyer";
    case Role::kSeller:
      return "seller";
    case Role::kMediator:
      break;
  }
  return "mediator";
}

Role ParseRole(std::string_view s) {
  if (s == "buyer") return Role::kBuyer;
  if (s == "seller") return Role::kSeller;
  if (s == "mediator") return Role::kMediator;
  throw ParseError("unknown role '" + std::string(s) + "'");
}

}  // namespace evoemo
