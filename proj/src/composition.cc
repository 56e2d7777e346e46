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

#include "stagescore/composition.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <string_view>
#include <unordered_set>

#include "stagescore/scene_cast.h"

namespace stagescore {
namespace {

struct SceneFacts {
  const Scene* scene;
  SceneCast cast;
  StageSnapshots snapshots;
};

std::vector<SceneFacts> Analyze(const StagePlay& play) {
  std::vector<SceneFacts> facts;
  facts.reserve(play.scenes.size());
  for (const Scene& scene : play.scenes) {
    SceneCast cast = SceneCast::Of(scene);
    StageSnapshots snapshots = BuildSnapshots(scene, cast);
    facts.push_back({&scene, std::move(cast), std::move(snapshots)});
  }
  return facts;
}

// Fraction helper: `good / total`, or 1 when there is nothing to measure.
double Ratio(int good, int total) {
  return total == 0 ? 1.0 : static_cast<double>(good) / total;
}

double SceneProxemics(const SceneFacts& facts, int k) {
  const std::vector<int> top = facts.cast.Top(k);
  if (top.empty()) return 1.0;
  std::vector<int> depth_sum(facts.cast.size(), 0);
  for (size_t t = 0; t < facts.scene->placements.size(); ++t) {
    depth_sum[facts.cast.speaker_of[t]] +=
        facts.scene->placements[t].position.depth;
  }
  double total = 0.0;
  for (int c : top) {
    const double mean_depth =
        static_cast<double>(depth_sum[c]) / facts.cast.quote_counts[c];
    total += 1.0 - mean_depth / 2.0;
  }
  return total / static_cast<double>(top.size());
}

double SnapshotsImbalance(const StageSnapshots& snapshots) {
  if (snapshots.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& snapshot : snapshots) {
    int on_stage = 0;
    int lateral = 0;
    for (const auto& position : snapshot) {
      if (!position) continue;
      ++on_stage;
      lateral += position->lateral;
    }
    sum += static_cast<double>(lateral) / on_stage;
  }
  return std::abs(sum / static_cast<double>(snapshots.size()));
}

double BalanceFromImbalance(double b, double delta) {
  if (b <= delta) return 1.0;
  return std::max(0.0, 1.0 - (b - delta) / (1.0 - delta));
}

template <typename Fn>
double MeanOverScenes(const std::vector<SceneFacts>& facts, Fn&& fn) {
  if (facts.empty()) return 1.0;
  double total = 0.0;
  for (const SceneFacts& f : facts) total += fn(f);
  return total / static_cast<double>(facts.size());
}

struct CharacterSubchecks {
  double facing = 1.0;
  double distinct_primaries = 1.0;
  double triangularity = 1.0;
  double anti_crowding = 1.0;
  double stability = 1.0;
};

CharacterSubchecks ComputeCharacterSubchecks(
    const std::vector<SceneFacts>& facts, int k, double tau) {
  int facing_pairs = 0, facing_ok = 0;
  int quotes = 0, distinct_ok = 0, uncrowded_ok = 0;
  int triangle_scenes = 0, triangle_ok = 0;
  int stability_quotes = 0, colinear = 0;

  for (const SceneFacts& f : facts) {
    const auto& placements = f.scene->placements;
    const int length = static_cast<int>(placements.size());
    for (int t = 0; t < length; ++t) {
      const auto& snapshot = f.snapshots[t];
      ++quotes;

      if (t > 0 && f.cast.speaker_of[t] != f.cast.speaker_of[t - 1]) {
        ++facing_pairs;
        const GridPosition& speaker = *snapshot[f.cast.speaker_of[t]];
        const GridPosition& previous = *snapshot[f.cast.speaker_of[t - 1]];
        facing_ok += AreFacing(speaker, previous);
      }

      const std::vector<int> primaries = TopOnStage(f.cast, snapshot, k);
      std::unordered_set<int> cells;
      for (int c : primaries) cells.insert(snapshot[c]->cell());
      distinct_ok += cells.size() == primaries.size();

      std::array<int, kGridCells> occupancy{};
      int on_stage = 0;
      for (const auto& position : snapshot) {
        if (!position) continue;
        ++on_stage;
        ++occupancy[position->cell()];
      }
      uncrowded_ok +=
          *std::max_element(occupancy.begin(), occupancy.end()) < 3;

      if (on_stage >= 3) {
        ++stability_quotes;
        const std::vector<int> top3 = TopOnStage(f.cast, snapshot, 3);
        colinear += TriangleArea(*snapshot[top3[0]], *snapshot[top3[1]],
                                 *snapshot[top3[2]]) == 0.0;
      }
    }

    if (f.cast.size() >= 3) {
      ++triangle_scenes;
      const int midpoint = (length - 1) / 2;
      const std::vector<int> top3 = f.cast.Top(3);
      std::array<GridPosition, 3> corners;
      for (int i = 0; i < 3; ++i) {
        const int c = top3[i];
        const auto& at_mid = f.snapshots[midpoint][c];
        corners[i] =
            at_mid ? *at_mid : placements[f.cast.first_quote[c]].position;
      }
      triangle_ok +=
          NormalizedTriangle(corners[0], corners[1], corners[2]) >= tau;
    }
  }

  CharacterSubchecks out;
  out.facing = Ratio(facing_ok, facing_pairs);
  out.distinct_primaries = Ratio(distinct_ok, quotes);
  out.triangularity = Ratio(triangle_ok, triangle_scenes);
  out.anti_crowding = Ratio(uncrowded_ok, quotes);
  out.stability = Ratio(stability_quotes - colinear, stability_quotes);
  return out;
}

}  // namespace

double TriangleArea(const GridPosition& a, const GridPosition& b,
                    const GridPosition& c) {
  const int twice = a.lateral * (b.depth - c.depth) +
                    b.lateral * (c.depth - a.depth) +
                    c.lateral * (a.depth - b.depth);
  return 0.5 * std::abs(twice);
}

double NormalizedTriangle(const GridPosition& a, const GridPosition& b,
                          const GridPosition& c) {
  return TriangleArea(a, b, c) / kMaxTriangleArea;
}

double ProxemicsScore(const StagePlay& play, int k) {
  return MeanOverScenes(Analyze(play),
                        [k](const SceneFacts& f) { return SceneProxemics(f, k); });
}

double SceneImbalance(const Scene& scene) {
  const SceneCast cast = SceneCast::Of(scene);
  return SnapshotsImbalance(BuildSnapshots(scene, cast));
}

double BalanceScore(const StagePlay& play, double delta) {
  return MeanOverScenes(Analyze(play), [delta](const SceneFacts& f) {
    return BalanceFromImbalance(SnapshotsImbalance(f.snapshots), delta);
  });
}

double CoverageScore(const StagePlay& play, const TaskBundle& bundle) {
  std::unordered_set<std::string_view> present;
  for (const Scene& scene : play.scenes) {
    for (const Placement& p : scene.placements) present.insert(p.quote_id);
  }
  const std::vector<std::string> references = bundle.ReferenceQuoteIds();
  int found = 0;
  for (const std::string& id : references) found += present.contains(id);
  return Ratio(found, static_cast<int>(references.size()));
}

double StageValidityPoints(const StagePlay& play, const TaskBundle& bundle,
                           int k, double delta) {
  return CoverageScore(play, bundle) + ProxemicsScore(play, k) +
         BalanceScore(play, delta);
}

double CharacterPoints(const StagePlay& play, int k, double tau) {
  const std::vector<SceneFacts> facts = Analyze(play);
  const double downstage = MeanOverScenes(
      facts, [k](const SceneFacts& f) { return SceneProxemics(f, k); });
  const CharacterSubchecks s = ComputeCharacterSubchecks(facts, k, tau);
  return downstage + s.facing + s.distinct_primaries + s.triangularity +
         s.anti_crowding + s.stability;
}

CompositionScores ScoreComposition(const StagePlay& play,
                                   const TaskBundle& bundle,
                                   const CompositionParams& params) {
  const std::vector<SceneFacts> facts = Analyze(play);
  const int k = params.k;
  const double coverage = CoverageScore(play, bundle);
  const double proxemics = MeanOverScenes(
      facts, [k](const SceneFacts& f) { return SceneProxemics(f, k); });
  const double balance = MeanOverScenes(facts, [&](const SceneFacts& f) {
    return BalanceFromImbalance(SnapshotsImbalance(f.snapshots), params.delta);
  });
  const CharacterSubchecks s = ComputeCharacterSubchecks(facts, k, params.tau);

  CompositionScores scores;
  scores.k_used = k;
  scores.delta_used = params.delta;
  scores.tau_used = params.tau;
  scores.sv = coverage + proxemics + balance;
  scores.cp = proxemics + s.facing + s.distinct_primaries + s.triangularity +
              s.anti_crowding + s.stability;
  scores.subchecks = {
      {"sv_coverage", coverage},
      {"s_prox", proxemics},
      {"s_balance", balance},
      {"d1_downstage", proxemics},
      {"d2_facing", s.facing},
      {"d3_distinct_primaries", s.distinct_primaries},
      {"d4_triangularity", s.triangularity},
      {"d5_anti_crowding", s.anti_crowding},
      {"d6_stability", s.stability},
  };
  return scores;
}

}  // namespace stagescore
