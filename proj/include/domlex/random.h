//
// Copyright 2026 The domlex Authors
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
//

#ifndef DOMLEX_RANDOM_H_
#define DOMLEX_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace domlex {

// Counter-based randomness. Every random decision in the toolkit is a pure
// function of (seed, indices...), so results do not depend on processing
// order or on the standard library's distribution implementations.

// SplitMix64 finalizer.
constexpr uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a, used to fold tokens into seeds.
constexpr uint64_t HashString(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr uint64_t DeriveSeed(uint64_t seed, std::initializer_list<uint64_t> parts) {
  uint64_t h = Mix64(seed);
  for (uint64_t p : parts) h = Mix64(h ^ Mix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

// Maps 64 random bits to [0, 1) with 53 bits of precision.
constexpr double UnitFromBits(uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform draw in [0, 1) keyed by (seed, parts...).
constexpr double UniformAt(uint64_t seed, std::initializer_list<uint64_t> parts) {
  return UnitFromBits(DeriveSeed(seed, parts));
}

// Sequential stream for procedures that consume a variable number of draws.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(uint64_t seed) : state_(seed) {}

  constexpr uint64_t Next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  constexpr double Uniform() { return UnitFromBits(Next()); }

  // Unbiased integer in [0, n) by rejection; n must be positive.
  constexpr uint64_t Below(uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x = Next();
    while (x >= limit) x = Next();
    return x % n;
  }

  // Standard normal via Box-Muller (one value per call).
  double Normal() {
    double u = Uniform();
    while (u <= 0.0) u = Uniform();
    const double v = Uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
  }

 private:
  uint64_t state_;
};

// `m` distinct values from [0, n) in draw order, via a partial
// Fisher-Yates shuffle over a virtual identity array. Requires m <= n.
inline std::vector<uint64_t> SampleWithoutReplacement(uint64_t n, size_t m,
                                                      SplitMix64& rng) {
  std::unordered_map<uint64_t, uint64_t> displaced;
  auto at = [&displaced](uint64_t i) {
    auto it = displaced.find(i);
    return it == displaced.end() ? i : it->second;
  };
  std::vector<uint64_t> picked;
  picked.reserve(m);
  for (uint64_t i = 0; i < m; ++i) {
    const uint64_t j = i + rng.Below(n - i);
    const uint64_t vi = at(i), vj = at(j);
    displaced[j] = vi;
    displaced[i] = vj;
    picked.push_back(vj);
  }
  return picked;
}

}  // namespace domlex

#endif  // DOMLEX_RANDOM_H_
