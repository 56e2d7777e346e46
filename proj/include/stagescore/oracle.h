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

// Builds a layout that the engine scores at r = 1.
//
// Speakers are the reference speakers and nobody moves inside a scene, so
// the remaining freedom is the scene partition and one cell per character
// per scene. Passages longer than the scene-length cap are split, trying the
// most balanced partitions first. Cells are found by depth-first search under
// the constraints a perfect score implies:
//   - primaries stand on the front row,
//   - characters new to a scene (after the first) enter on the back row,
//   - characters carried into a scene keep their cell or step to the back
//     row,
//   - every character in a scene has its own cell.
// Each complete scene is checked with the scorers themselves; the finished
// play is accepted only when the full engine returns r = 1.

#ifndef STAGESCORE_ORACLE_H_
#define STAGESCORE_ORACLE_H_

#include <string>

#include "stagescore/reward.h"
#include "stagescore/stage_play.h"
#include "stagescore/task_bundle.h"

namespace stagescore {

struct OracleResult {
  StagePlay play;
  std::string raw;
  double r = 0.0;
  // False when the search gave up and `play` is a best-effort layout.
  bool exact = false;
};

OracleResult GenGreedyOracle(const TaskBundle& bundle,
                             const RewardConfig& config = {});

}  // namespace stagescore

#endif  // STAGESCORE_ORACLE_H_
