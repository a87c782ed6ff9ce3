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

#include "evoemo/emotion.h"

#include <string>

#include "evoemo/errors.h"

namespace evoemo {
namespace {

constexpr std::array<std::string_view, kNumEmotions> kLabels = {
    "anger", "disgust", "fear", "happiness", "sadness", "surprise", "neutral"};

}  // namespace

Emotion EmotionFromIndex(int index) {
  if (index < 0 || index >= kNumEmotions) {
    throw ValidationError("emotion index out of range: " +
                          std::to_string(index));
  }
  return static_cast<Emotion>(index);
}

std::string_view EmotionLabel(Emotion e) { return kLabels[EmotionIndex(e)]; }

Emotion ParseEmotion(std::string_view label) {
  for (int i = 0; i < kNumEmotions; ++i) {
    if (kLabels[i] == label) return static_cast<Emotion>(i);
  }
  throw ParseError("unknown emotion '" + std::string(label) + "'");
}

Valence EmotionValence(Emotion e) {
  switch (e) {
    case Emotion::kAnger:
    case Emotion::kDisgust:
    case Emotion::kFear:
    case Emotion::kSadness:
      return Valence::kNegative;
    case Emotion::kHappiness:
    case Emotion::kSurprise:
      return Valence::kPositive;
    case Emotion::kNeutral:
      break;
  }
  return Valence::kNeutral;
}

}  // namespace evoemo
