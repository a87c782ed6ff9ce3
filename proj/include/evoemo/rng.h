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

#ifndef EVOEMO_RNG_H_
#define EVOEMO_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evoemo {

// Seeded random stream. The engine is std::mt19937_64; all conversions to
// real-valued variates are done here so that streams are reproducible across
// standard library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of precision.
  double Uniform();
  double UniformIn(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n). n must be positive.
  uint64_t Below(uint64_t n);

  bool Bernoulli(double p) { return Uniform() < p; }

  // Standard normal via Box-Muller (one variate per call, no caching).
  double Normal();

  double Exponential();

  // A draw from the symmetric Dirichlet with concentration 1 over k cells.
  std::vector<double> UniformSimplex(int k);

  // Index drawn proportionally to non-negative weights with positive sum.
  size_t Categorical(std::span<const double> weights);

  // Engine state as text, for checkpoints.
  std::string SaveState() const;
  static Rng FromState(const std::string& state);

 private:
  Rng() = default;
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; used to derive independent child seeds.
uint64_t MixSeed(uint64_t seed, uint64_t key);
uint64_t DeriveSeed(uint64_t root, std::initializer_list<uint64_t> keys);

// Stable 64-bit FNV-1a hash; std::hash is not stable across builds.
uint64_t HashKey(std::string_view key);

}  // namespace evoemo

#endif  // EVOEMO_RNG_H_
