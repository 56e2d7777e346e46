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

// Scene structure and transitions (ST, 0..4 points) = t1 + t2 + t3 + t4:
//   t1 boundaries   scene boundaries where both rooms are well formed and
//                   differ,
//   t2 entrances    first appearances in scenes >= 2 by characters absent
//                   from the previous scene that happen on the back row,
//   t3 carry-over   characters present on both sides of a boundary: same
//                   room -> they start where they stood; new room -> they
//                   start on the back row or where they stood,
//   t4 length cap   mean over scenes of min(1, max_scene_length / length).
// Vacuous subchecks (single scene, no entrants, no carry-over) score 1.

#ifndef STAGESCORE_SCENE_TRANSITIONS_H_
#define STAGESCORE_SCENE_TRANSITIONS_H_

#include <string>
#include <vector>

#include "stagescore/stage_play.h"
#include "stagescore/subchecks.h"

namespace stagescore {

struct RoomSpec {
  double width = 0.0;
  double height = 0.0;
  double depth = 0.0;
  std::string material;
  bool well_formed = false;
};

// Reads "W x H x D" (separator x or X, optional whitespace, optional unit
// suffix on each number such as "15ft x 12ft x 8ft") and the material.
// Missing fields, non-positive numbers or an empty material leave
// well_formed false.
RoomSpec ParseRoomSpec(const Scene& scene);

// Whether two scenes share a room. Well-formed rooms compare by dimensions
// and material; otherwise the raw (trimmed) fields must match.
bool SameRoom(const Scene& a, const Scene& b);

struct SceneParams {
  int max_scene_length = 30;
};

struct BoundaryDiagnostic {
  int before_scene = 0;  // index N of the scene before the boundary
  bool both_well_formed = false;
  bool room_changed = false;
  int entrants = 0;
  int entrants_upstage = 0;
  int carried_over = 0;
  int carried_over_consistent = 0;
};

struct SceneTransitionScores {
  double st = 0.0;  // [0, 4]
  Subchecks subchecks;
  std::vector<BoundaryDiagnostic> per_boundary;
};

SceneTransitionScores ScoreSceneTransitions(const StagePlay& play,
                                            const SceneParams& params);

}  // namespace stagescore

#endif  // STAGESCORE_SCENE_TRANSITIONS_H_
