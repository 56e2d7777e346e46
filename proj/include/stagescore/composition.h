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

// Spatial composition: stage-position validity (SV, 0..3 points) and
// character positioning (CP, 0..6 points).
//
// SV = coverage + proxemics + balance, where
//   coverage  = fraction of reference quotes present in the play,
//   proxemics = per scene, mean over the k most active speakers of
//               1 - d/2 with d their quote-weighted mean depth,
//   balance   = per scene, 1 if b <= delta else linear decay to 0 at b = 1,
//               b = |mean over quotes of the mean lateral x on stage|.
//
// CP sums six subchecks:
//   d1 downstage dominance   = proxemics (same k),
//   d2 facing                = consecutive quotes by different speakers whose
//                              speakers face each other (see AreFacing),
//   d3 distinct primaries    = quotes at which the k most active characters
//                              on stage occupy pairwise distinct cells,
//   d4 triangularity         = scenes with >= 3 characters whose three most
//                              active form a triangle with normalized area
//                              >= tau at the scene midpoint,
//   d5 anti-crowding         = quotes at which no cell holds >= 3 characters,
//   d6 stability             = 1 - quotes at which the three most active
//                              characters on stage are colinear (only quotes
//                              with >= 3 characters on stage count).
// Subchecks with nothing to measure score 1. Scene-level values are averaged
// uniformly over scenes; quote-level values over all quotes of the play.

#ifndef STAGESCORE_COMPOSITION_H_
#define STAGESCORE_COMPOSITION_H_

#include "stagescore/grid.h"
#include "stagescore/stage_play.h"
#include "stagescore/subchecks.h"
#include "stagescore/task_bundle.h"

namespace stagescore {

struct CompositionParams {
  int k = 2;           // primaries for proxemics and distinct-primaries
  double delta = 0.4;  // balance tolerance
  double tau = 0.5;    // minimum normalized triangle area
};

struct CompositionScores {
  double sv = 0.0;  // [0, 3]
  double cp = 0.0;  // [0, 6]
  Subchecks subchecks;
  int k_used = 0;
  double delta_used = 0.0;
  double tau_used = 0.0;
};

// Largest shoelace area of any three cells of the 3x3 grid.
inline constexpr double kMaxTriangleArea = 2.0;

double TriangleArea(const GridPosition& a, const GridPosition& b,
                    const GridPosition& c);

// TriangleArea() / kMaxTriangleArea, in [0, 1].
double NormalizedTriangle(const GridPosition& a, const GridPosition& b,
                          const GridPosition& c);

double ProxemicsScore(const StagePlay& play, int k);

// Imbalance b of a single scene.
double SceneImbalance(const Scene& scene);

double BalanceScore(const StagePlay& play, double delta);

double CoverageScore(const StagePlay& play, const TaskBundle& bundle);

double StageValidityPoints(const StagePlay& play, const TaskBundle& bundle,
                           int k, double delta);

double CharacterPoints(const StagePlay& play, int k, double tau);

CompositionScores ScoreComposition(const StagePlay& play,
                                   const TaskBundle& bundle,
                                   const CompositionParams& params);

}  // namespace stagescore

#endif  // STAGESCORE_COMPOSITION_H_
