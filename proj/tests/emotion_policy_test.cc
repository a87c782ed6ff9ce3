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

#include "evoemo/emotion_policy.h"

#include <array>
#include <cmath>

#include "doctest.h"
#include "evoemo/emotion.h"
#include "evoemo/errors.h"
#include "evoemo/rng.h"

namespace evoemo {
namespace {

EmotionRow OneHot(Emotion e) {
  EmotionRow row{};
  row[EmotionIndex(e)] = 1.0;
  return row;
}

EmotionPolicy PolicyWithRows(const std::array<EmotionRow, kNumEmotions>& rows,
                             Emotion initial, TemperatureParams t = {}) {
  EmotionPolicy p;
  p.id = 1;
  p.initial_emotion = initial;
  p.temperature = t;
  p.matrix = TransitionMatrix::FromRows(rows);
  return p;
}

TEST_CASE("schedule temperature") {
  CHECK(ScheduleTemperature({.tau0 = 1.0, .delta = 0.5}, 0) == doctest::Approx(1.0));
  CHECK(ScheduleTemperature({.tau0 = 1.0, .delta = 0.5}, 1) == doctest::Approx(0.5));
  CHECK(ScheduleTemperature({.tau0 = 0.9, .delta = 0.5}, 10) == doctest::Approx(0.1));
  TemperatureParams p{.tau0 = 1.7, .delta = 0.13};
  double prev = ScheduleTemperature(p, 0);
  for (int t = 1; t < 60; ++t) {
    const double cur = ScheduleTemperature(p, t);
    CHECK(cur <= prev);
    CHECK(cur >= kMinTemperature);
    CHECK(cur <= p.tau0);
    prev = cur;
  }
}

TEST_CASE("temperature params validation") {
  CHECK_THROWS_AS(TemperatureParams({.tau0 = 0.0}).Validate(), ValidationError);
  CHECK_THROWS_AS(TemperatureParams({.tau0 = 1.0, .delta = 1.0}).Validate(),
                  ValidationError);
  CHECK_NOTHROW(TemperatureParams({.tau0 = 1.0, .delta = 0.0}).Validate());
}

TEST_CASE("transition matrix validation") {
  std::array<EmotionRow, kNumEmotions> rows;
  rows.fill(OneHot(Emotion::kNeutral));
  CHECK_NOTHROW(TransitionMatrix::FromRows(rows));
  rows[2][0] = 0.5;
  CHECK_THROWS_AS(TransitionMatrix::FromRows(rows), ValidationError);
  rows[2] = OneHot(Emotion::kNeutral);
  rows[3][6] = 1.5;
  rows[3][0] = -0.5;
  CHECK_THROWS_AS(TransitionMatrix::FromRows(rows), ValidationError);
}

TEST_CASE("one-hot row is sampled with probability 1") {
  Rng rng(3);
  for (double tau : {0.1, 1.0, 5.0}) {
    for (int i = 0; i < 200; ++i) {
      CHECK(SampleTempered(OneHot(Emotion::kSadness), tau, rng) == Emotion::kSadness);
    }
  }
}

TEST_CASE("uniform row passes chi-square at 0.001") {
  EmotionRow row;
  row.fill(1.0 / 7.0);
  Rng rng(11);
  std::array<int, kNumEmotions> counts{};
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[EmotionIndex(SampleTempered(row, 1.0, rng))];
  double chi2 = 0;
  const double expected = n / 7.0;
  for (int c : counts) {
    CHECK(std::abs(c / double(n) - 1.0 / 7.0) < 0.01);
    chi2 += (c - expected) * (c - expected) / expected;
  }
  // Upper 0.001 quantile of chi-square with 6 degrees of freedom.
  CHECK(chi2 < 22.458);
}

TEST_CASE("low temperature concentrates on the argmax") {
  EmotionRow row{};
  row[EmotionIndex(Emotion::kAnger)] = 0.8;
  row[EmotionIndex(Emotion::kNeutral)] = 0.2;
  Rng rng(5);
  int hits = 0;
  for (int i = 0; i < 10000; ++i) {
    hits += SampleTempered(row, 0.01, rng) == Emotion::kAnger;
  }
  CHECK(hits / 10000.0 > 0.999);

  // Closed form q = p^(1/tau) / sum.
  const EmotionRow q = TemperedDistribution(row, 0.5);
  CHECK(q[0] == doctest::Approx(0.64 / 0.68));
  CHECK(q[6] == doctest::Approx(0.04 / 0.68));
}

TEST_CASE("unit temperature reproduces the raw row") {
  const EmotionRow row{0.05, 0.1, 0.15, 0.2, 0.25, 0.15, 0.1};
  Rng rng(17);
  std::array<int, kNumEmotions> counts{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[EmotionIndex(SampleTempered(row, 1.0, rng))];
  double tv = 0;
  for (int j = 0; j < kNumEmotions; ++j) tv += std::abs(counts[j] / double(n) - row[j]);
  CHECK(tv / 2 < 0.01);
}

TEST_CASE("degenerate row raises") {
  EmotionRow zero{};
  CHECK_THROWS_AS(TemperedDistribution(zero, 1.0), DegenerateRowError);
}

TEST_CASE("identity matrix keeps the initial emotion") {
  EmotionPolicy p;
  p.initial_emotion = Emotion::kNeutral;
  p.matrix = TransitionMatrix::Identity();
  Rng rng(1);
  const EmotionTrajectory traj = RealizeTrajectory(p, 5, rng);
  REQUIRE(traj.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(traj[i].emotion == Emotion::kNeutral);
    CHECK(traj[i].turn == i + 1);
  }
}

TEST_CASE("permutation matrix cycles") {
  std::array<EmotionRow, kNumEmotions> rows;
  for (int i = 0; i < kNumEmotions; ++i) rows[i] = OneHot(EmotionFromIndex(i));
  rows[EmotionIndex(Emotion::kAnger)] = OneHot(Emotion::kHappiness);
  rows[EmotionIndex(Emotion::kHappiness)] = OneHot(Emotion::kAnger);
  const EmotionPolicy p = PolicyWithRows(rows, Emotion::kAnger);
  Rng rng(9);
  const EmotionTrajectory traj = RealizeTrajectory(p, 4, rng);
  REQUIRE(traj.size() == 4);
  CHECK(traj[0].emotion == Emotion::kAnger);
  CHECK(traj[1].emotion == Emotion::kHappiness);
  CHECK(traj[2].emotion == Emotion::kAnger);
  CHECK(traj[3].emotion == Emotion::kHappiness);
}

TEST_CASE("trajectories are deterministic given the seed") {
  Rng init(2);
  const EmotionPolicy p = RandomPolicy(init, 7);
  Rng a(42), b(42);
  CHECK(RealizeTrajectory(p, 30, a) == RealizeTrajectory(p, 30, b));
}

TEST_CASE("random policies are valid") {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const EmotionPolicy p = RandomPolicy(rng, i + 1);
    CHECK_NOTHROW(p.Validate());
    CHECK(p.temperature.tau0 >= 0.5);
    CHECK(p.temperature.tau0 <= 1.0);
    CHECK(p.temperature.delta >= 0.0);
    CHECK(p.temperature.delta <= 0.5);
    for (const EmotionRow& row : p.matrix.rows()) {
      double sum = 0;
      for (double v : row) sum += v;
      CHECK(std::abs(sum - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("constant policy") {
  const EmotionPolicy p = ConstantPolicy(Emotion::kFear);
  Rng rng(1);
  for (const TrajectoryStep& s : RealizeTrajectory(p, 10, rng)) {
    CHECK(s.emotion == Emotion::kFear);
  }
}

TEST_CASE("emotion labels round-trip") {
  for (int i = 0; i < kNumEmotions; ++i) {
    const Emotion e = EmotionFromIndex(i);
    CHECK(ParseEmotion(EmotionLabel(e)) == e);
  }
  CHECK_THROWS(ParseEmotion("joy"));
  CHECK(EmotionValence(Emotion::kAnger) == Valence::kNegative);
  CHECK(EmotionValence(Emotion::kHappiness) == Valence::kPositive);
  CHECK(EmotionValence(Emotion::kNeutral) == Valence::kNeutral);
}

}  // namespace
}  // namespace evoemo
