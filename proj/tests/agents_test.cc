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

#include <cmath>

#include "doctest.h"
#include "evoemo/errors.h"
#include "evoemo/negotiation.h"
#include "evoemo/rng.h"
#include "test_util.h"

namespace evoemo {
namespace {

ScriptedParams Flat(double base) {
  ScriptedParams p;
  p.base_concession = base;
  return p;
}

NegotiationState AfterAsk(double ask, std::optional<double> offer = {}) {
  NegotiationState st;
  st.turn = offer ? 2 : 1;
  st.seller_ask = ask;
  st.seller_asks = {ask};
  if (offer) {
    st.buyer_offer = offer;
    st.buyer_offers = {*offer};
  }
  return st;
}

TEST_CASE("seller concession") {
  const Scenario s = testing::MakeScenario("s", 100, 50, 60);
  Rng rng(1);
  ScriptedParams p = Flat(0.1);
  const AgentReply neutral =
      ScriptedSellerReply(AfterAsk(100), s, p, Emotion::kNeutral, rng);
  REQUIRE(neutral.offer);
  CHECK(*neutral.offer == doctest::Approx(95));

  p.emotion_weights[EmotionIndex(Emotion::kSadness)] = 2.0;
  const AgentReply sad = ScriptedSellerReply(AfterAsk(100), s, p, Emotion::kSadness, rng);
  REQUIRE(sad.offer);
  CHECK(*sad.offer == doctest::Approx(90));
}

TEST_CASE("seller opens at list price") {
  const Scenario s = testing::MakeScenario("s", 100, 50, 60);
  Rng rng(1);
  const AgentReply r = ScriptedSellerReply(NegotiationState{}, s, Flat(0.1),
                                           Emotion::kNeutral, rng);
  CHECK(r.offer == 100);
}

TEST_CASE("seller walk-away rate") {
  const Scenario s = testing::MakeScenario("s", 100, 50, 60);
  ScriptedParams p = Flat(0.1);
  p.breakdown_hazard[EmotionIndex(Emotion::kAnger)] = 0.15;
  Rng rng(2024);
  int walks = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    walks += ScriptedSellerReply(AfterAsk(100), s, p, Emotion::kAnger, rng).walk_away;
  }
  CHECK(std::abs(walks / double(n) - 0.15) <= 0.01);
}

TEST_CASE("seller never goes below cost") {
  const Scenario s = testing::MakeScenario("s", 100, 50, 60);
  ScriptedParams p = Flat(0.5);
  p.emotion_weights.fill(2.0);
  Rng rng(3);
  NegotiationState st = AfterAsk(100);
  for (int i = 0; i < 40; ++i) {
    const AgentReply r = ScriptedSellerReply(st, s, p, Emotion::kAnger, rng);
    REQUIRE(r.offer);
    CHECK(*r.offer >= 50);
    CHECK(*r.offer <= *st.seller_ask);
    st.seller_ask = r.offer;
  }
}

TEST_CASE("seller accepts an offer at its ask") {
  const Scenario s = testing::MakeScenario("s", 100, 50, 60);
  Rng rng(1);
  const AgentReply r =
      ScriptedSellerReply(AfterAsk(100, 96), s, Flat(0.1), Emotion::kNeutral, rng);
  CHECK(r.accept);
}

TEST_CASE("buyer accepts below target") {
  const Scenario s = testing::MakeScenario("s", 100, 50, 60);
  ScriptedParams p = Flat(0.1);
  p.accept_margin = 0;
  Rng rng(1);
  CHECK(ScriptedBuyerReply(AfterAsk(58), s, p, Emotion::kNeutral, rng).accept);
}

TEST_CASE("buyer opening offer") {
  const Scenario s = testing::MakeScenario("s", 100, 50, 60);
  ScriptedParams p = Flat(0.1);
  p.opening_fraction = 0.8;
  Rng rng(1);
  const AgentReply r = ScriptedBuyerReply(AfterAsk(100), s, p, Emotion::kNeutral, rng);
  CHECK(r.offer == doctest::Approx(48));
}

TEST_CASE("buyer offers are monotone and capped by the ask") {
  const Scenario s = testing::MakeScenario("s", 100, 50, 60);
  const ScriptedParams p = ScriptedParams::DefaultBuyer();
  Rng rng(4);
  NegotiationState st = AfterAsk(100);
  double ask = 100;
  for (int i = 0; i < 20; ++i) {
    const AgentReply r = ScriptedBuyerReply(st, s, p, Emotion::kNeutral, rng);
    if (!r.offer) break;
    if (st.buyer_offer) CHECK(*r.offer >= *st.buyer_offer);
    CHECK(*r.offer <= ask);
    st.buyer_offer = r.offer;
    ask = std::max(*r.offer + 1.0, ask - 3);
    st.seller_ask = ask;
  }
}

TEST_CASE("scripted replies replay exactly") {
  const Scenario s = testing::MakeScenario("s", 100, 50, 60);
  Rng a(77), b(77);
  for (int i = 0; i < 20; ++i) {
    const NegotiationState st = AfterAsk(100 - i, 40 + i);
    CHECK(ScriptedBuyerReply(st, s, ScriptedParams::DefaultBuyer(), Emotion::kAnger, a) ==
          ScriptedBuyerReply(st, s, ScriptedParams::DefaultBuyer(), Emotion::kAnger, b));
    CHECK(ScriptedSellerReply(st, s, ScriptedParams::DefaultSeller(), Emotion::kFear, a) ==
          ScriptedSellerReply(st, s, ScriptedParams::DefaultSeller(), Emotion::kFear, b));
  }
}

TEST_CASE("default calibration directionality") {
  const ScriptedParams p = ScriptedParams::DefaultSeller();
  for (Emotion e : {Emotion::kAnger, Emotion::kDisgust, Emotion::kSadness}) {
    CHECK(p.emotion_weights[EmotionIndex(e)] > 1.0);
    CHECK(p.breakdown_hazard[EmotionIndex(e)] > 0.0);
  }
  for (Emotion e : {Emotion::kHappiness, Emotion::kSurprise}) {
    CHECK(p.emotion_weights[EmotionIndex(e)] < 1.0);
    CHECK(p.breakdown_hazard[EmotionIndex(e)] == 0.0);
  }
  CHECK(p.emotion_weights[EmotionIndex(Emotion::kNeutral)] == 1.0);
  CHECK(p.breakdown_hazard[EmotionIndex(Emotion::kNeutral)] == 0.0);
}

TEST_CASE("emotion-blind agents ignore emotions") {
  const Scenario s = testing::MakeScenario("s", 500, 250, 300);
  for (uint64_t seed = 0; seed < 10; ++seed) {
    ScriptedBuyer b0(ScriptedParams::DefaultBuyer()), b1(ScriptedParams::DefaultBuyer());
    ScriptedSeller s0(ScriptedParams::EmotionBlind(0.1)), s1(ScriptedParams::EmotionBlind(0.1));
    RuleMediator m;
    const Episode x = RunEpisode(s, b0, s0, m, EmotionPlan::Fixed(Emotion::kAnger), 30, seed);
    const Episode y = RunEpisode(s, b1, s1, m, EmotionPlan::Fixed(Emotion::kHappiness), 30, seed);
    CHECK(x.outcome == y.outcome);
    REQUIRE(x.transcript.turns.size() == y.transcript.turns.size());
    for (size_t i = 0; i < x.transcript.turns.size(); ++i) {
      CHECK(x.transcript.turns[i].offer == y.transcript.turns[i].offer);
    }
  }
}

TEST_CASE("params validation") {
  ScriptedParams p;
  p.base_concession = 0.0;
  CHECK_THROWS_AS(p.Validate(), ValidationError);
  p = ScriptedParams{};
  p.breakdown_hazard[0] = 1.0;
  CHECK_THROWS_AS(p.Validate(), ValidationError);
  p = ScriptedParams{};
  p.emotion_weights[0] = -1.0;
  CHECK_THROWS_AS(p.Validate(), ValidationError);
}

TEST_CASE("rounding to cents") {
  CHECK(RoundToCents(12.345) == doctest::Approx(12.35));
  CHECK(RoundToCents(12.344) == doctest::Approx(12.34));
}

}  // namespace
}  // namespace evoemo
