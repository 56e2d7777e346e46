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

#include "stagescore/rng.h"

namespace stagescore {

uint64_t SplitMix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t SeededRng::Derive(uint64_t seed, uint64_t stream) {
  uint64_t state = seed;
  const uint64_t mixed = SplitMix64(state);
  state = mixed ^ (stream * 0xd1b54a32d192ed03ULL);
  return SplitMix64(state);
}

uint64_t SeededRng::Below(uint64_t n) {
  // Draws below 2^64 mod n would bias the residues; reject them.
  const uint64_t threshold = (0 - n) % n;
  uint64_t draw;
  do {
    draw = engine_();
  } while (draw < threshold);
  return draw % n;
}

int SeededRng::Between(int lo, int hi) {
  return lo + static_cast<int>(Below(static_cast<uint64_t>(hi - lo) + 1));
}

double SeededRng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

}  // namespace stagescore
