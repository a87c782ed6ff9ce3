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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "evoemo/errors.h"

namespace evoemo {

void TemperatureParams::Validate() const {
  if (!(tau0 > 0) || !std::isfinite(tau0)) {
    throw ValidationError("tau0 must be positive, got " + std::to_string(tau0));
  }
  if (!(delta >= 0 && delta < 1)) {
    throw ValidationError("delta must lie in [0, 1), got " +
                          std::to_string(delta));
  }
}

double ScheduleTemperature(const TemperatureParams& params, int t) {
  return std::max(kMinTemperature, params.tau0 * std::pow(1.0 - params.delta, t));
}

void ValidateRow(const EmotionRow& row) {
  double sum = 0;
  for (double p : row) {
    if (!(p >= 0 && p <= 1)) {
      throw ValidationError("transition probability outside [0, 1]: " +
                            std::to_string(p));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kRowSumTolerance) {
    throw ValidationError("transition row sums to " + std::to_string(sum));
  }
}

TransitionMatrix TransitionMatrix::Identity() {
  TransitionMatrix m;
  for (int i = 0; i < kNumEmotions; ++i) m.rows_[i][i] = 1.0;
  return m;
}

TransitionMatrix TransitionMatrix::Uniform() {
  TransitionMatrix m;
  for (auto& row : m.rows_) row.fill(1.0 / kNumEmotions);
  return m;
}

TransitionMatrix TransitionMatrix::FromRows(
    const std::array<EmotionRow, kNumEmotions>& rows) {
  for (const EmotionRow& row : rows) ValidateRow(row);
  TransitionMatrix m;
  m.rows_ = rows;
  return m;
}

void EmotionPolicy::Validate() const {
  EmotionFromIndex(EmotionIndex(initial_emotion));
  temperature.Validate();
  for (const EmotionRow& row : matrix.rows()) ValidateRow(row);
}

bool EmotionPolicy::SameGenome(const EmotionPolicy& other) const {
  return initial_emotion == other.initial_emotion &&
         temperature == other.temperature && matrix == other.matrix;
}

EmotionRow TemperedDistribution(const EmotionRow& row, double tau) {
  if (!(tau > 0)) throw ValidationError("temperature must be positive");
  EmotionRow logits;
  double max_logit = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < kNumEmotions; ++j) {
    logits[j] = row[j] > 0 ? std::log(row[j]) / tau
                           : -std::numeric_limits<double>::infinity();
    max_logit = std::max(max_logit, logits[j]);
  }
  if (!std::isfinite(max_logit)) {
    throw DegenerateRowError("transition row has no probability mass");
  }
  EmotionRow q{};
  double total = 0;
  for (int j = 0; j < kNumEmotions; ++j) {
    q[j] = row[j] > 0 ? std::exp(logits[j] - max_logit) : 0.0;
    total += q[j];
  }
  for (double& v : q) v /= total;
  return q;
}

Emotion SampleTempered(const EmotionRow& row, double tau, Rng& rng) {
  const EmotionRow q = TemperedDistribution(row, tau);
  return static_cast<Emotion>(rng.Categorical(q));
}

double StepTemperature(const EmotionPolicy& policy, int t,
                       std::optional<double> temperature_override) {
  if (temperature_override) return *temperature_override;
  return ScheduleTemperature(policy.temperature, t);
}

Emotion SampleNextEmotion(const EmotionPolicy& policy, Emotion current, int t,
                          Rng& rng, std::optional<double> temperature_override) {
  if (t < 1) throw ValidationError("turn index must be >= 1");
  return SampleTempered(policy.matrix.row(current),
                        StepTemperature(policy, t, temperature_override), rng);
}

EmotionTrajectory RealizeTrajectory(const EmotionPolicy& policy, int n_turns,
                                    Rng& rng,
                                    std::optional<double> temperature_override) {
  if (n_turns < 1) throw ValidationError("n_turns must be >= 1");
  EmotionTrajectory trajectory;
  trajectory.reserve(n_turns);
  trajectory.push_back({1, policy.initial_emotion,
                        StepTemperature(policy, 1, temperature_override)});
  for (int t = 2; t <= n_turns; ++t) {
    const Emotion next = SampleNextEmotion(policy, trajectory.back().emotion, t,
                                           rng, temperature_override);
    trajectory.push_back(
        {t, next, StepTemperature(policy, t, temperature_override)});
  }
  return trajectory;
}

EmotionPolicy RandomPolicy(Rng& rng, uint64_t id) {
  std::array<EmotionRow, kNumEmotions> rows;
  for (EmotionRow& row : rows) {
    const std::vector<double> draw = rng.UniformSimplex(kNumEmotions);
    std::copy(draw.begin(), draw.end(), row.begin());
  }
  EmotionPolicy policy;
  policy.id = id;
  policy.temperature.tau0 = rng.UniformIn(0.5, 1.0);
  policy.temperature.delta = rng.UniformIn(0.0, 0.5);
  policy.initial_emotion = static_cast<Emotion>(rng.Below(kNumEmotions));
  policy.matrix = TransitionMatrix::FromRows(rows);
  return policy;
}

EmotionPolicy ConstantPolicy(Emotion emotion, uint64_t id) {
  std::array<EmotionRow, kNumEmotions> rows{};
  for (EmotionRow& row : rows) row[EmotionIndex(emotion)] = 1.0;
  EmotionPolicy policy;
  policy.id = id;
  policy.initial_emotion = emotion;
  policy.matrix = TransitionMatrix::FromRows(rows);
  return policy;
}

}  // namespace evoemo
