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

#include "stagescore/movement.h"

#include <algorithm>
#include <optional>

#include "stagescore/scene_cast.h"

namespace stagescore {
namespace {

int Sign(int v) { return (v > 0) - (v < 0); }

struct RunTally {
  int runs = 0;
  int facing = 0;
};

// Maximal runs of quotes alternating between exactly two speakers.
RunTally TallyAlternatingRuns(const Scene& scene, int min_length) {
  RunTally tally;
  const SceneCast cast = SceneCast::Of(scene);
  const std::vector<int>& s = cast.speaker_of;
  const int length = static_cast<int>(s.size());
  std::vector<std::optional<GridPosition>> current(cast.characters.size());
  int applied = 0;  // quotes folded into `current`
  auto advance_to = [&](int t) {
    for (; applied <= t; ++applied) {
      current[s[applied]] = scene.placements[applied].position;
    }
  };

  int i = 0;
  while (i < length) {
    int j = i + 1;
    if (j < length && s[j] != s[i]) {
      ++j;
      while (j < length && s[j] != s[j - 1] && s[j] == s[j - 2]) ++j;
    }
    if (j - i >= min_length && j - i >= 2) {
      advance_to(j - 1);
      ++tally.runs;
      tally.facing += AreFacing(*current[s[j - 1]], *current[s[j - 2]]);
    }
    i = j - i >= 2 ? j - 1 : j;
  }
  return tally;
}

}  // namespace

std::vector<MoveEvent> DetectMoves(const StagePlay& play) {
  std::vector<MoveEvent> events;
  int quote_base = 0;
  for (const Scene& scene : play.scenes) {
    const SceneCast cast = SceneCast::Of(scene);
    std::vector<std::optional<GridPosition>> last(cast.characters.size());
    std::vector<int> last_depth_sign(cast.characters.size(), 0);
    for (size_t t = 0; t < scene.placements.size(); ++t) {
      const int c = cast.speaker_of[t];
      const GridPosition& to = scene.placements[t].position;
      if (last[c] && *last[c] != to) {
        const GridPosition& from = *last[c];
        const int dd = to.depth - from.depth;
        MoveEvent event;
        event.character = cast.characters[c];
        event.from = from;
        event.to = to;
        event.quote_index = quote_base + static_cast<int>(t);
        event.manhattan = Manhattan(from, to);
        event.is_lateral = dd == 0;
        event.is_depth_flip =
            dd != 0 && last_depth_sign[c] != 0 && Sign(dd) != last_depth_sign[c];
        if (dd != 0) last_depth_sign[c] = Sign(dd);
        events.push_back(std::move(event));
      }
      last[c] = to;
    }
    quote_base += static_cast<int>(scene.placements.size());
  }
  return events;
}

double SMove(const StagePlay& play, double lambda, double gamma) {
  const std::vector<MoveEvent> events = DetectMoves(play);
  if (events.empty()) return 1.0;
  double total = 0.0;
  for (const MoveEvent& e : events) {
    total += (e.manhattan <= 1 ? 1.0 : 0.0) + (e.is_lateral ? lambda : 0.0) -
             (e.is_depth_flip ? gamma : 0.0);
  }
  return std::clamp(total / static_cast<double>(events.size()), 0.0, 1.0);
}

MovementScores ScoreMovement(const StagePlay& play,
                             const MovementParams& params) {
  const std::vector<MoveEvent> events = DetectMoves(play);
  double economy = 1.0, lateral = 1.0, anti_thrash = 1.0;
  double s_move = 1.0;
  if (!events.empty()) {
    int small = 0, sideways = 0, flips = 0;
    for (const MoveEvent& e : events) {
      small += e.manhattan <= 1;
      sideways += e.is_lateral;
      flips += e.is_depth_flip;
    }
    const double n = static_cast<double>(events.size());
    economy = small / n;
    lateral = sideways / n;
    anti_thrash = 1.0 - flips / n;
    s_move = std::clamp(
        (small + params.lambda * sideways - params.gamma * flips) / n, 0.0,
        1.0);
  }

  const int quotes = play.TotalPlacements();
  const double rate =
      quotes == 0 ? 0.0 : static_cast<double>(events.size()) / quotes;
  double sparsity = 1.0;
  if (rate > params.rho_max) {
    sparsity = params.rho_max >= 1.0
                   ? 0.0
                   : std::max(0.0, 1.0 - (rate - params.rho_max) /
                                             (1.0 - params.rho_max));
  }

  RunTally tally;
  for (const Scene& scene : play.scenes) {
    const RunTally scene_tally = TallyAlternatingRuns(scene, params.run_length);
    tally.runs += scene_tally.runs;
    tally.facing += scene_tally.facing;
  }
  const double facing =
      tally.runs == 0 ? 1.0 : static_cast<double>(tally.facing) / tally.runs;

  MovementScores scores;
  scores.mc = economy + 2.0 * lateral + anti_thrash + sparsity + facing;
  scores.s_move_diagnostic = s_move;
  scores.subchecks = {
      {"a_economy", economy},       {"b_lateral", lateral},
      {"c_anti_thrash", anti_thrash}, {"d_sparsity", sparsity},
      {"e_dialogue_facing", facing},
  };
  return scores;
}

}  // namespace stagescore
