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

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "stagescore/subchecks.h"
#include "test_util.h"

namespace stagescore {
namespace {

using ::stagescore::testing::MakeBundle;
using ::stagescore::testing::MakePlay;
using ::stagescore::testing::MakeScene;
using ::stagescore::testing::Mirror;
using ::stagescore::testing::P;

// Cross-product area, written independently of the shoelace in the library.
double OracleArea(int x1, int y1, int x2, int y2, int x3, int y3) {
  const double ux = x2 - x1, uy = y2 - y1, vx = x3 - x1, vy = y3 - y1;
  return std::fabs(ux * vy - uy * vx) / 2.0;
}

StagePlay RandomPlay(std::mt19937_64& rng, int characters, int quotes,
                     int scenes) {
  std::vector<Scene> out(scenes);
  for (int q = 0; q < quotes; ++q) {
    const int s = static_cast<int>(rng() % scenes);
    const int c = static_cast<int>(rng() % characters);
    out[s].placements.push_back(P(std::to_string(q), "C" + std::to_string(c),
                                  static_cast<int>(rng() % 3) - 1,
                                  static_cast<int>(rng() % 3)));
  }
  std::erase_if(out, [](const Scene& s) { return s.placements.empty(); });
  return MakePlay(std::move(out));
}

TEST(TriangleTest, BruteForceOverAllTriples) {
  int triples = 0;
  double max_area = 0.0;
  double min_nonzero = 1e9;
  for (int a = 0; a < 9; ++a) {
    for (int b = a + 1; b < 9; ++b) {
      for (int c = b + 1; c < 9; ++c) {
        ++triples;
        const GridPosition pa = GridPosition::FromCell(a);
        const GridPosition pb = GridPosition::FromCell(b);
        const GridPosition pc = GridPosition::FromCell(c);
        const double oracle =
            OracleArea(pa.lateral, pa.depth, pb.lateral, pb.depth, pc.lateral,
                       pc.depth);
        EXPECT_DOUBLE_EQ(TriangleArea(pa, pb, pc), oracle);
        const double normalized = NormalizedTriangle(pa, pb, pc);
        EXPECT_GE(normalized, 0.0);
        EXPECT_LE(normalized, 1.0);
        max_area = std::max(max_area, oracle);
        if (oracle > 0.0) min_nonzero = std::min(min_nonzero, oracle);
      }
    }
  }
  EXPECT_EQ(triples, 84);
  EXPECT_EQ(max_area, 2.0);
  EXPECT_EQ(min_nonzero, 0.5);
  EXPECT_EQ(kMaxTriangleArea, max_area);
}

TEST(TriangleTest, Examples) {
  EXPECT_EQ(NormalizedTriangle({-1, 0}, {1, 0}, {0, 2}), 1.0);
  EXPECT_EQ(NormalizedTriangle({-1, 1}, {0, 1}, {1, 1}), 0.0);
  EXPECT_EQ(TriangleArea({0, 0}, {1, 0}, {0, 1}), 0.5);
  EXPECT_EQ(NormalizedTriangle({0, 0}, {1, 0}, {0, 1}), 0.25);
}

TEST(ProxemicsTest, TopSpeakersFront) {
  const StagePlay play = MakePlay({MakeScene(
      {P("1", "A", -1, 0), P("2", "B", 1, 0), P("3", "A", -1, 0)})});
  EXPECT_EQ(ProxemicsScore(play, 2), 1.0);
}

TEST(ProxemicsTest, ThreeDepths) {
  const StagePlay play = MakePlay({MakeScene(
      {P("1", "A", -1, 0), P("2", "B", 0, 1), P("3", "C", 1, 2)})});
  EXPECT_DOUBLE_EQ(ProxemicsScore(play, 3), 0.5);
}

TEST(ProxemicsTest, AlternatingDepthWeightedMean) {
  const StagePlay play = MakePlay({MakeScene({P("1", "A", 0, 0),
                                              P("2", "A", 0, 2),
                                              P("3", "A", 0, 0),
                                              P("4", "A", 0, 2)})});
  // Quote-weighted mean depth (0+2+0+2)/4 = 1.
  EXPECT_DOUBLE_EQ(ProxemicsScore(play, 1), 1.0 - 1.0 / 2.0);
}

TEST(ProxemicsTest, FewerSpeakersThanK) {
  const StagePlay play = MakePlay({MakeScene({P("1", "A", 0, 1)})});
  EXPECT_DOUBLE_EQ(ProxemicsScore(play, 3), 0.5);
}

TEST(BalanceTest, AllRightIsMaximallyImbalanced) {
  const StagePlay play = MakePlay(
      {MakeScene({P("1", "A", 1, 0), P("2", "B", 1, 1), P("3", "A", 1, 0)})});
  EXPECT_EQ(SceneImbalance(play.scenes[0]), 1.0);
  EXPECT_EQ(BalanceScore(play, 0.4), 0.0);
}

TEST(BalanceTest, MirrorSymmetricLayout) {
  const StagePlay play = MakePlay({MakeScene(
      {P("1", "A", 0, 0), P("2", "B", -1, 1), P("3", "C", 1, 1)})});
  // On-stage means: 0, -0.5, 0 -> |mean| = 1/6 <= delta.
  EXPECT_NEAR(SceneImbalance(play.scenes[0]), 1.0 / 6.0, 1e-12);
  EXPECT_EQ(BalanceScore(play, 0.4), 1.0);
  const StagePlay pairs = MakePlay({MakeScene(
      {P("1", "A", -1, 0), P("2", "B", 1, 0), P("3", "A", -1, 0)})});
  EXPECT_EQ(BalanceScore(MakePlay({MakeScene({P("1", "A", 0, 0)})}), 0.4),
            1.0);
  EXPECT_LE(SceneImbalance(pairs.scenes[0]), 1.0 / 3.0 + 1e-12);
}

TEST(BalanceTest, LinearMargin) {
  std::vector<Placement> placements;
  for (int i = 0; i < 10; ++i) {
    placements.push_back(P(std::to_string(i), "A", i < 7 ? 1 : 0, 0));
  }
  const StagePlay play = MakePlay({MakeScene(placements)});
  EXPECT_NEAR(SceneImbalance(play.scenes[0]), 0.7, 1e-12);
  EXPECT_NEAR(BalanceScore(play, 0.4), 0.5, 1e-12);
}

TEST(StageValidityTest, FullMarks) {
  const TaskBundle bundle = MakeBundle({{"1", "A"}, {"2", "B"}, {"3", "A"}});
  const StagePlay play = MakePlay({MakeScene(
      {P("1", "A", -1, 0), P("2", "B", 1, 0), P("3", "A", -1, 0)})});
  EXPECT_DOUBLE_EQ(StageValidityPoints(play, bundle, 2, 0.4), 3.0);
}

TEST(StageValidityTest, SumOfSubchecks) {
  const TaskBundle bundle = MakeBundle({{"1", "A"}, {"2", "B"}});
  // Both centered at depth 1: s_prox = 0.5, balance 1, full coverage.
  const StagePlay play =
      MakePlay({MakeScene({P("1", "A", 0, 1), P("2", "B", 0, 1)})});
  EXPECT_DOUBLE_EQ(StageValidityPoints(play, bundle, 2, 0.4), 2.5);
}

TEST(StageValidityTest, HalfCoverage) {
  const TaskBundle bundle =
      MakeBundle({{"1", "A"}, {"2", "A"}, {"3", "A"}, {"4", "A"}});
  const StagePlay play =
      MakePlay({MakeScene({P("1", "A", 0, 0), P("2", "A", 0, 0)})});
  EXPECT_DOUBLE_EQ(CoverageScore(play, bundle), 0.5);
}

TEST(CharacterPointsTest, TwoHanderIsPerfect) {
  const StagePlay play = MakePlay({MakeScene(
      {P("1", "A", -1, 0), P("2", "B", 1, 0), P("3", "A", -1, 0),
       P("4", "B", 1, 0)})});
  const CompositionScores s = ScoreComposition(play, TaskBundle{}, {});
  EXPECT_EQ(SubcheckValue(s.subchecks, "d4_triangularity"), 1.0);
  EXPECT_DOUBLE_EQ(s.cp, 6.0);
  EXPECT_DOUBLE_EQ(CharacterPoints(play, 2, 0.5), 6.0);
}

TEST(CharacterPointsTest, ColinearMiddleRow) {
  const StagePlay play = MakePlay({MakeScene(
      {P("1", "A", -1, 1), P("2", "B", 0, 1), P("3", "C", 1, 1),
       P("4", "A", -1, 1), P("5", "B", 0, 1), P("6", "C", 1, 1)})});
  const CompositionScores s = ScoreComposition(play, TaskBundle{}, {});
  EXPECT_EQ(SubcheckValue(s.subchecks, "d4_triangularity"), 0.0);
  EXPECT_EQ(SubcheckValue(s.subchecks, "d6_stability"), 0.0);
  EXPECT_LE(s.cp, 4.0);
}

TEST(CharacterPointsTest, OpenTriangleCredited) {
  const StagePlay play = MakePlay({MakeScene(
      {P("1", "A", -1, 0), P("2", "B", 1, 0), P("3", "C", 0, 2)})});
  const CompositionScores s = ScoreComposition(play, TaskBundle{}, {});
  EXPECT_EQ(SubcheckValue(s.subchecks, "d4_triangularity"), 1.0);
}

TEST(CharacterPointsTest, StackedPrimariesAndCrowding) {
  const StagePlay play = MakePlay({MakeScene(
      {P("1", "A", 0, 0), P("2", "B", 0, 0), P("3", "C", 0, 0)})});
  const CompositionScores s = ScoreComposition(play, TaskBundle{}, {});
  // Quote 1: one primary, distinct. Quotes 2, 3: A and B share a cell.
  EXPECT_NEAR(SubcheckValue(s.subchecks, "d3_distinct_primaries"), 1.0 / 3.0,
              1e-12);
  // Three in one cell only at quote 3.
  EXPECT_NEAR(SubcheckValue(s.subchecks, "d5_anti_crowding"), 2.0 / 3.0,
              1e-12);
  // Same column two rows apart is not facing.
  const StagePlay apart =
      MakePlay({MakeScene({P("1", "A", 0, 0), P("2", "B", 0, 2)})});
  EXPECT_EQ(SubcheckValue(ScoreComposition(apart, TaskBundle{}, {}).subchecks,
                          "d2_facing"),
            0.0);
}

TEST(CompositionPropertyTest, BoundsAndMirrorSymmetry) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const StagePlay play = RandomPlay(rng, 1 + static_cast<int>(rng() % 6),
                                      1 + static_cast<int>(rng() % 40),
                                      1 + static_cast<int>(rng() % 3));
    const CompositionScores s = ScoreComposition(play, TaskBundle{}, {});
    EXPECT_GE(s.sv, 0.0);
    EXPECT_LE(s.sv, 3.0);
    EXPECT_GE(s.cp, 0.0);
    EXPECT_LE(s.cp, 6.0);
    for (const auto& [name, value] : s.subchecks) {
      EXPECT_GE(value, 0.0) << name;
      EXPECT_LE(value, 1.0) << name;
    }
    const CompositionScores m =
        ScoreComposition(Mirror(play), TaskBundle{}, {});
    EXPECT_NEAR(s.sv, m.sv, 1e-12);
    EXPECT_NEAR(s.cp, m.cp, 1e-12);
  }
}

TEST(CompositionPropertyTest, UpstageMoveNeverRaisesProxemics) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    StagePlay play = RandomPlay(rng, 1 + static_cast<int>(rng() % 5),
                                1 + static_cast<int>(rng() % 30), 1);
    const double before = ProxemicsScore(play, 2);
    auto& placements = play.scenes[0].placements;
    Placement& p = placements[rng() % placements.size()];
    if (p.position.depth == 2) continue;
    ++p.position.depth;
    EXPECT_LE(ProxemicsScore(play, 2), before + 1e-12);
  }
}

TEST(CompositionPropertyTest, CenteringOneSideNeverRaisesImbalance) {
  // With everyone on the centre or right, pulling one right-hand placement
  // to the centre cannot move the signed mean away from zero.
  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    StagePlay play = RandomPlay(rng, 1 + static_cast<int>(rng() % 5),
                                1 + static_cast<int>(rng() % 30), 1);
    for (Placement& p : play.scenes[0].placements) {
      p.position.lateral = std::abs(p.position.lateral);
    }
    const double before = SceneImbalance(play.scenes[0]);
    for (Placement& p : play.scenes[0].placements) {
      if (p.position.lateral == 1) {
        p.position.lateral = 0;
        break;
      }
    }
    EXPECT_LE(SceneImbalance(play.scenes[0]), before + 1e-12);
  }
}

}  // namespace
}  // namespace stagescore
