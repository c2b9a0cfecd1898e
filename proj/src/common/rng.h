// Copyright 2026 The rforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RFORGE_COMMON_RNG_H_
#define RFORGE_COMMON_RNG_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace rforge {

// SplitMix64 finalizer over (a, b). Used to derive independent, reproducible
// substreams from one root seed.
inline uint64_t MixSeed(uint64_t a, uint64_t b) {
  uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// mt19937_64 with distribution helpers of our own. The std:: distributions are
// implementation-defined, which would make campaign output depend on the
// standard library in use.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }

  // Uniform in [0, n). Requires n > 0.
  uint64_t UniformInt(uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Uniform in [0, 1).
  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool Bernoulli(double p) { return Uniform01() < p; }

  // Standard normal via Box-Muller.
  double Gaussian() {
    double u1 = Uniform01();
    while (u1 <= 0.0) u1 = Uniform01();
    const double u2 = Uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  template <typename T>
  T Pick(const std::vector<T>& items) {
    return items[UniformInt(items.size())];
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rforge

#endif  // RFORGE_COMMON_RNG_H_
