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

#include "evoemo/rng.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"

namespace evoemo {
namespace {

TEST_CASE("equal seeds give equal streams") {
  Rng a(123), b(123), c(124);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const uint64_t x = a.NextU64();
    CHECK(x == b.NextU64());
    differs |= x != c.NextU64();
  }
  CHECK(differs);
}

TEST_CASE("state save and restore") {
  Rng a(5);
  for (int i = 0; i < 10; ++i) a.Uniform();
  Rng b = Rng::FromState(a.SaveState());
  for (int i = 0; i < 50; ++i) CHECK(a.NextU64() == b.NextU64());
}

TEST_CASE("uniform range and moments") {
  Rng rng(1);
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.Uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("below stays in range") {
  Rng rng(2);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 50000; ++i) ++counts[rng.Below(5)];
  for (int c : counts) CHECK(std::abs(c / 50000.0 - 0.2) < 0.01);
}

TEST_CASE("uniform simplex") {
  Rng rng(3);
  for (int k : {1, 2, 7}) {
    for (int i = 0; i < 100; ++i) {
      const std::vector<double> x = rng.UniformSimplex(k);
      REQUIRE(x.size() == size_t(k));
      CHECK(std::accumulate(x.begin(), x.end(), 0.0) == doctest::Approx(1.0));
      for (double v : x) CHECK(v >= 0.0);
    }
  }
}

TEST_CASE("categorical follows weights") {
  Rng rng(4);
  const std::vector<double> w{1, 0, 3};
  std::vector<int> counts(3, 0);
  for (int i = 0; i < 40000; ++i) ++counts[rng.Categorical(w)];
  CHECK(counts[1] == 0);
  CHECK(std::abs(counts[2] / 40000.0 - 0.75) < 0.01);
}

TEST_CASE("derived seeds") {
  CHECK(DeriveSeed(1, {2, 3}) == DeriveSeed(1, {2, 3}));
  CHECK(DeriveSeed(1, {2, 3}) != DeriveSeed(1, {3, 2}));
  CHECK(DeriveSeed(1, {2}) != DeriveSeed(2, {2}));
  CHECK(HashKey("laptop") == HashKey("laptop"));
  CHECK(HashKey("laptop") != HashKey("sofa"));
}

}  // namespace
}  // namespace evoemo
