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

#include "stagescore/scene_cast.h"

#include <algorithm>
#include <numeric>

namespace stagescore {

SceneCast SceneCast::Of(const Scene& scene) {
  SceneCast cast;
  const int length = static_cast<int>(scene.placements.size());
  cast.speaker_of.reserve(length);
  for (int t = 0; t < length; ++t) {
    const std::string& speaker = scene.placements[t].speaker;
    int c = cast.Find(speaker);
    if (c < 0) {
      c = cast.size();
      cast.characters.push_back(speaker);
      cast.quote_counts.push_back(0);
      cast.first_quote.push_back(t);
    }
    ++cast.quote_counts[c];
    cast.speaker_of.push_back(c);
  }
  cast.by_activity.resize(cast.characters.size());
  std::iota(cast.by_activity.begin(), cast.by_activity.end(), 0);
  // Characters are indexed by first appearance, so a stable sort on count
  // keeps the tie-break.
  std::stable_sort(cast.by_activity.begin(), cast.by_activity.end(),
                   [&cast](int a, int b) {
                     return cast.quote_counts[a] > cast.quote_counts[b];
                   });
  return cast;
}

std::vector<int> SceneCast::Top(int k) const {
  const int n = std::min(std::max(k, 0), size());
  return std::vector<int>(by_activity.begin(), by_activity.begin() + n);
}

int SceneCast::Find(const std::string& name) const {
  // Casts are small; a linear scan beats hashing here.
  for (int c = 0; c < size(); ++c) {
    if (characters[c] == name) return c;
  }
  return -1;
}

StageSnapshots BuildSnapshots(const Scene& scene, const SceneCast& cast) {
  StageSnapshots snapshots;
  snapshots.reserve(scene.placements.size());
  std::vector<std::optional<GridPosition>> current(cast.characters.size());
  for (size_t t = 0; t < scene.placements.size(); ++t) {
    current[cast.speaker_of[t]] = scene.placements[t].position;
    snapshots.push_back(current);
  }
  return snapshots;
}

std::vector<int> TopOnStage(
    const SceneCast& cast,
    const std::vector<std::optional<GridPosition>>& snapshot, int k) {
  std::vector<int> top;
  for (int c : cast.by_activity) {
    if (static_cast<int>(top.size()) >= k) break;
    if (snapshot[c]) top.push_back(c);
  }
  return top;
}

}  // namespace stagescore
