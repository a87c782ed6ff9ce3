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

#ifndef EVOEMO_EMOTION_H_
#define EVOEMO_EMOTION_H_

#include <array>
#include <string_view>

namespace evoemo {

// The seven basic emotions. Indices are part of the serialization format.
enum class Emotion : int {
  kAnger = 0,
  kDisgust = 1,
  kFear = 2,
  kHappiness = 3,
  kSadness = 4,
  kSurprise = 5,
  kNeutral = 6,
};

inline constexpr int kNumEmotions = 7;

inline constexpr std::array<Emotion, kNumEmotions> kAllEmotions = {
    Emotion::kAnger,   Emotion::kDisgust, Emotion::kFear,
    Emotion::kHappiness, Emotion::kSadness, Emotion::kSurprise,
    Emotion::kNeutral,
};

constexpr int EmotionIndex(Emotion e) { return static_cast<int>(e); }
Emotion EmotionFromIndex(int index);

std::string_view EmotionLabel(Emotion e);
// Accepts the lowercase labels ("anger", ..., "neutral"); throws ParseError.
Emotion ParseEmotion(std::string_view label);

enum class Valence { kNegative, kNeutral, kPositive };

// anger, disgust, fear and sadness are negative; happiness and surprise are
// positive.
Valence EmotionValence(Emotion e);

}  // namespace evoemo

#endif  // EVOEMO_EMOTION_H_
