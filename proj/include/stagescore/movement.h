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

// Movement coherence (MC, 0..6 points).
//
// A move is a change of a character's cell between two of its consecutive
// quotes inside one scene. MC = a + 2b + c + d + e with
//   a economy          fraction of moves with Manhattan length <= 1,
//   b lateral          fraction of moves that stay on the same row,
//   c anti-thrash      1 - fraction of moves that reverse the character's
//                      previous depth direction,
//   d sparsity         1 while moves/quotes <= rho_max, then linear to 0,
//   e dialogue facing  fraction of alternating two-speaker runs of at least
//                      `run_length` quotes that end with the pair facing.
// With no moves a = b = c = 1; with no qualifying run e = 1.

#ifndef STAGESCORE_MOVEMENT_H_
#define STAGESCORE_MOVEMENT_H_

#include <string>
#include <vector>

#include "stagescore/grid.h"
#include "stagescore/stage_play.h"
#include "stagescore/subchecks.h"

namespace stagescore {

struct MoveEvent {
  std::string character;
  GridPosition from;
  GridPosition to;
  int quote_index = 0;  // global index of the quote that lands on `to`
  int manhattan = 0;
  bool is_lateral = false;
  bool is_depth_flip = false;
};

struct MovementParams {
  double lambda = 0.5;
  double gamma = 0.5;
  double rho_max = 0.5;
  int run_length = 6;
};

struct MovementScores {
  double mc = 0.0;  // [0, 6]
  Subchecks subchecks;
  double s_move_diagnostic = 1.0;
};

std::vector<MoveEvent> DetectMoves(const StagePlay& play);

// mean over moves of [1{manhattan <= 1} + lambda 1{lateral} - gamma 1{flip}],
// clamped to [0, 1]; 1 when nothing moves.
double SMove(const StagePlay& play, double lambda, double gamma);

MovementScores ScoreMovement(const StagePlay& play,
                             const MovementParams& params);

}  // namespace stagescore

#endif  // STAGESCORE_MOVEMENT_H_
