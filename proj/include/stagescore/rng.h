// Copyright 2026 The Stagescore Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Portable seeded randomness.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Standard distributions are implementation-defined, so every
// derived quantity is computed here from raw 64-bit draws:
//   Below(n)   rejection sampling on the raw draw (no modulo bias),
//   Uniform()  top 53 bits scaled by 2^-53, in [0, 1),
//   Derive()   SplitMix64 mixing of (seed, stream) for independent streams.
// Fixtures generated from a seed are therefore identical on every platform.

#ifndef STAGESCORE_RNG_H_
#define STAGESCORE_RNG_H_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace stagescore {

// One SplitMix64 step; advances `state`.
uint64_t SplitMix64(uint64_t& state);

class SeededRng {
 public:
  explicit SeededRng(uint64_t seed) : engine_(seed) {}

  // Seed for an independent stream, e.g. one per bundle or per candidate.
  static uint64_t Derive(uint64_t seed, uint64_t stream);

  uint64_t Next() { return engine_(); }

  // Uniform integer in [0, n). Requires n > 0.
  uint64_t Below(uint64_t n);

  // Uniform integer in [lo, hi]. Requires lo <= hi.
  int Between(int lo, int hi);

  // Uniform double in [0, 1).
  double Uniform();

  bool Bernoulli(double p) { return Uniform() < p; }

  // Fisher-Yates shuffle.
  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[Below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace stagescore

#endif  // STAGESCORE_RNG_H_
