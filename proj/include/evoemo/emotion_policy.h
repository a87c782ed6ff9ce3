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

#ifndef EVOEMO_EMOTION_POLICY_H_
#define EVOEMO_EMOTION_POLICY_H_

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "evoemo/emotion.h"
#include "evoemo/rng.h"

namespace evoemo {

// Temperatures never fall below this value.
inline constexpr double kMinTemperature = 0.1;
inline constexpr double kRowSumTolerance = 1e-9;

struct TemperatureParams {
  double tau0 = 1.0;
  double delta = 0.0;

  // Throws ValidationError unless tau0 > 0 and 0 <= delta < 1.
  void Validate() const;
  bool operator==(const TemperatureParams&) const = default;
};

// max(0.1, tau0 * (1 - delta)^t).
double ScheduleTemperature(const TemperatureParams& params, int t);

using EmotionRow = std::array<double, kNumEmotions>;

// Row-stochastic 7x7 matrix. Row i is the distribution of the next emotion
// given current emotion i. Every instance satisfies the invariant.
class TransitionMatrix {
 public:
  static TransitionMatrix Identity();
  static TransitionMatrix Uniform();
  // Throws ValidationError if any entry is outside [0, 1] or a row does not
  // sum to 1 within kRowSumTolerance.
  static TransitionMatrix FromRows(
      const std::array<EmotionRow, kNumEmotions>& rows);

  const EmotionRow& row(Emotion from) const {
    return rows_[EmotionIndex(from)];
  }
  const EmotionRow& row(int from) const { return rows_[from]; }
  double at(int from, int to) const { return rows_[from][to]; }
  const std::array<EmotionRow, kNumEmotions>& rows() const { return rows_; }

  bool operator==(const TransitionMatrix&) const = default;

 private:
  TransitionMatrix() = default;
  std::array<EmotionRow, kNumEmotions> rows_{};
};

void ValidateRow(const EmotionRow& row);

// The evolvable genome. The emotion sequence expressed in an episode is a
// realization of (initial_emotion, temperature, matrix).
struct EmotionPolicy {
  uint64_t id = 0;
  Emotion initial_emotion = Emotion::kNeutral;
  TemperatureParams temperature;
  TransitionMatrix matrix = TransitionMatrix::Uniform();

  void Validate() const;
  // Genome equality; ignores id.
  bool SameGenome(const EmotionPolicy& other) const;
  bool operator==(const EmotionPolicy&) const = default;
};

struct TrajectoryStep {
  int turn = 1;
  Emotion emotion = Emotion::kNeutral;
  double temperature = 1.0;
  bool operator==(const TrajectoryStep&) const = default;
};
using EmotionTrajectory = std::vector<TrajectoryStep>;

// q_j proportional to row_j^(1/tau), computed in log space. Zero entries stay
// zero. Throws DegenerateRowError if the row has no mass.
EmotionRow TemperedDistribution(const EmotionRow& row, double tau);

Emotion SampleTempered(const EmotionRow& row, double tau, Rng& rng);

// Samples the emotion that follows `current` at turn t >= 1 using the
// scheduled temperature tau(t), or `temperature_override` when given.
Emotion SampleNextEmotion(const EmotionPolicy& policy, Emotion current, int t,
                          Rng& rng,
                          std::optional<double> temperature_override = {});

// Temperature used for the t-th entry of a trajectory.
double StepTemperature(const EmotionPolicy& policy, int t,
                       std::optional<double> temperature_override);

// Entry 1 is the initial emotion; entry t (t >= 2) is sampled from entry
// t - 1 at temperature StepTemperature(policy, t).
EmotionTrajectory RealizeTrajectory(
    const EmotionPolicy& policy, int n_turns, Rng& rng,
    std::optional<double> temperature_override = {});

// Random genome: Dirichlet(1) rows, tau0 ~ U[0.5, 1], delta ~ U[0, 0.5],
// initial emotion uniform.
EmotionPolicy RandomPolicy(Rng& rng, uint64_t id);

// A policy that always expresses `emotion`.
EmotionPolicy ConstantPolicy(Emotion emotion, uint64_t id = 0);

}  // namespace evoemo

#endif  // EVOEMO_EMOTION_POLICY_H_
