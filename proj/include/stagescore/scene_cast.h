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

// Per-scene bookkeeping shared by the composition, movement and transition
// scorers: who speaks, how often, and where everybody stands after each quote.
//
// A character is "on stage" at quote t once it has spoken at or before t in
// the current scene; it holds its most recent position until it speaks
// again. Activity is the character's quote count in the scene, ties broken by
// first appearance.

#ifndef STAGESCORE_SCENE_CAST_H_
#define STAGESCORE_SCENE_CAST_H_

#include <optional>
#include <string>
#include <vector>

#include "stagescore/grid.h"
#include "stagescore/stage_play.h"

namespace stagescore {

struct SceneCast {
  std::vector<std::string> characters;  // order of first appearance
  std::vector<int> quote_counts;
  std::vector<int> first_quote;  // local quote index
  std::vector<int> speaker_of;   // local quote index -> character
  std::vector<int> by_activity;  // characters, most active first

  static SceneCast Of(const Scene& scene);

  int size() const { return static_cast<int>(characters.size()); }

  // The min(k, size()) most active characters.
  std::vector<int> Top(int k) const;

  // Index of `name`, or -1.
  int Find(const std::string& name) const;
};

// snapshots[t][c] is the position of character c after quote t, or nullopt if
// c has not entered yet.
using StageSnapshots = std::vector<std::vector<std::optional<GridPosition>>>;

StageSnapshots BuildSnapshots(const Scene& scene, const SceneCast& cast);

// The k most active characters among those on stage in `snapshot`.
std::vector<int> TopOnStage(const SceneCast& cast,
                            const std::vector<std::optional<GridPosition>>& snapshot,
                            int k);

}  // namespace stagescore

#endif  // STAGESCORE_SCENE_CAST_H_
