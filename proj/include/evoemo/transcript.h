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

#ifndef EVOEMO_TRANSCRIPT_H_
#define EVOEMO_TRANSCRIPT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evoemo/emotion.h"
#include "evoemo/scenario.h"

namespace evoemo {

// Default cap on total dialogue turns (buyer + seller).
inline constexpr int kDefaultMaxTurns = 30;

enum class Speaker { kBuyer, kSeller };

struct Turn {
  int index = 1;
  Speaker speaker = Speaker::kSeller;
  std::optional<Emotion> emotion;
  std::string message;
  std::optional<double> offer;
  bool accept = false;
  bool walk_away = false;

  bool operator==(const Turn&) const = default;
};

struct Transcript {
  std::string scenario_id;
  std::vector<Turn> turns;
  uint64_t seed = 0;

  bool operator==(const Transcript&) const = default;
};

enum class OutcomeStatus { kAccepted, kBreakdown, kTimeout };

struct Outcome {
  OutcomeStatus status = OutcomeStatus::kTimeout;
  std::optional<double> final_price;  // present iff accepted
  int rounds = 0;

  bool success() const { return status == OutcomeStatus::kAccepted; }
  bool operator==(const Outcome&) const = default;
};

enum class Classification { kAccepted, kBreakdown, kOngoing };

// The state (t, e_t, p_t) seen by the agents.
struct NegotiationState {
  int turn = 0;  // turns played so far
  Emotion buyer_emotion = Emotion::kNeutral;
  // Number of consecutive latest buyer turns expressing buyer_emotion.
  int buyer_emotion_streak = 0;
  std::optional<double> seller_ask;
  std::optional<double> buyer_offer;
  std::vector<double> seller_asks;
  std::vector<double> buyer_offers;
};

NegotiationState StateFromTurns(std::span<const Turn> turns);

// Throws ValidationError on records that break the turn-taking protocol:
// non-contiguous indices, wrong speaker order, non-positive offers, accept
// together with walk-away, or accepting when the other side has no offer.
void ValidateTurns(std::span<const Turn> turns);

// Rule-based mediator. Accepted when the latest turn accepts or the buyer's
// latest offer is at least the seller's latest ask; breakdown when the latest
// turn walks away; ongoing otherwise.
Classification Classify(std::span<const Turn> turns, const Scenario& scenario);

// Price agreed in an accepted prefix: the seller's ask when the buyer accepts
// or offers at or above the ask, the buyer's offer when the seller accepts.
double AgreedPrice(std::span<const Turn> turns);

std::string_view SpeakerLabel(Speaker s);
std::string_view OutcomeLabel(OutcomeStatus s);
std::string_view ClassificationLabel(Classification c);
Speaker ParseSpeaker(std::string_view s);
OutcomeStatus ParseOutcomeStatus(std::string_view s);

}  // namespace evoemo

#endif  // EVOEMO_TRANSCRIPT_H_
