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

#include "evoemo/transcript.h"

#include <string>

#include "evoemo/errors.h"

namespace evoemo {
namespace {

const Turn* LatestOffer(std::span<const Turn> turns, Speaker speaker) {
  for (auto it = turns.rbegin(); it != turns.rend(); ++it) {
    if (it->speaker == speaker && it->offer) return &*it;
  }
  return nullptr;
}

Speaker ExpectedSpeaker(int index) {
  return index % 2 == 1 ? Speaker::kSeller : Speaker::kBuyer;
}

}  // namespace

NegotiationState StateFromTurns(std::span<const Turn> turns) {
  NegotiationState state;
  state.turn = static_cast<int>(turns.size());
  for (const Turn& turn : turns) {
    if (turn.speaker == Speaker::kSeller) {
      if (turn.offer) {
        state.seller_asks.push_back(*turn.offer);
        state.seller_ask = turn.offer;
      }
      continue;
    }
    if (turn.offer) {
      state.buyer_offers.push_back(*turn.offer);
      state.buyer_offer = turn.offer;
    }
    const Emotion e = turn.emotion.value_or(Emotion::kNeutral);
    if (state.buyer_emotion_streak > 0 && e == state.buyer_emotion) {
      ++state.buyer_emotion_streak;
    } else {
      state.buyer_emotion = e;
      state.buyer_emotion_streak = 1;
    }
  }
  return state;
}

void ValidateTurns(std::span<const Turn> turns) {
  for (size_t i = 0; i < turns.size(); ++i) {
    const Turn& turn = turns[i];
    const std::string at = "turn " + std::to_string(i + 1) + ": ";
    if (turn.index != static_cast<int>(i) + 1) {
      throw ValidationError(at + "index " + std::to_string(turn.index) +
                            " breaks the 1..n sequence");
    }
    if (turn.speaker != ExpectedSpeaker(turn.index)) {
      throw ValidationError(at + "speakers must alternate, seller first");
    }
    if (turn.offer && !(*turn.offer > 0)) {
      throw ValidationError(at + "offer must be positive");
    }
    if (turn.accept && turn.walk_away) {
      throw ValidationError(at + "cannot both accept and walk away");
    }
    if (turn.accept) {
      const Speaker other = turn.speaker == Speaker::kSeller ? Speaker::kBuyer
                                                             : Speaker::kSeller;
      if (LatestOffer(turns.first(i), other) == nullptr) {
        throw ValidationError(at + "accepts but the other side has no offer");
      }
    }
  }
}

Classification Classify(std::span<const Turn> turns, const Scenario&) {
  if (turns.empty()) throw ValidationError("cannot classify an empty prefix");
  ValidateTurns(turns);
  const Turn& last = turns.back();
  if (last.walk_away) return Classification::kBreakdown;
  if (last.accept) return Classification::kAccepted;
  const Turn* ask = LatestOffer(turns, Speaker::kSeller);
  const Turn* bid = LatestOffer(turns, Speaker::kBuyer);
  if (ask && bid && *bid->offer >= *ask->offer) {
    return Classification::kAccepted;
  }
  return Classification::kOngoing;
}

double AgreedPrice(std::span<const Turn> turns) {
  if (turns.empty()) throw ValidationError("no turns");
  const Turn* ask = LatestOffer(turns, Speaker::kSeller);
  const Turn* bid = LatestOffer(turns, Speaker::kBuyer);
  const Turn& last = turns.back();
  if (last.accept) {
    const Turn* accepted = last.speaker == Speaker::kBuyer ? ask : bid;
    if (accepted == nullptr) throw ValidationError("nothing to accept");
    return *accepted->offer;
  }
  if (ask && bid && *bid->offer >= *ask->offer) return *ask->offer;
  throw ValidationError("prefix is not accepted");
}

std::string_view SpeakerLabel(Speaker s) {
  return s == Speaker::kBuyer ? "buyer" : "seller";
}

std::string_view OutcomeLabel(OutcomeStatus s) {
  switch (s) {
    case OutcomeStatus::kAccepted:
      return "accepted";
    case OutcomeStatus::kBreakdown:
      return "breakdown";
    case OutcomeStatus::kTimeout:
      break;
  }
  return "timeout";
}

std::string_view ClassificationLabel(Classification c) {
  switch (c) {
    case Classification::kAccepted:
      return "accepted";
    case Classification::kBreakdown:
      return "breakdown";
    case Classification::kOngoing:
      break;
  }
  return "ongoing";
}

Speaker ParseSpeaker(std::string_view s) {
  if (s == "buyer") return Speaker::kBuyer;
  if (s == "seller") return Speaker::kSeller;
  throw ParseError("unknown speaker '" + std::string(s) + "'");
}

OutcomeStatus ParseOutcomeStatus(std::string_view s) {
  if (s == "accepted") return OutcomeStatus::kAccepted;
  if (s == "breakdown") return OutcomeStatus::kBreakdown;
  if (s == "timeout") return OutcomeStatus::kTimeout;
  throw ParseError("unknown outcome status '" + std::string(s) + "'");
}

}  // namespace evoemo
