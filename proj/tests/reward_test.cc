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

#include "stagescore/reward.h"

#include <cmath>
#include <random>
#include <string>

#include "gtest/gtest.h"
#include "stagescore/oracle.h"
#include "stagescore/synth.h"
#include "test_util.h"

namespace stagescore {
namespace {

// r = 1_json * (QA + AR + SV/3 + CP/6 + MC/6 + ST/4) / 6, transcribed.
double FormulaOracle(const ComponentScores& s) {
  if (!s.json_valid) return 0.0;
  return (s.qa + s.ar + s.sv / 3 + s.cp / 6 + s.mc / 6 + s.st / 4) / 6;
}

ComponentScores RandomScores(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ComponentScores s;
  s.json_valid = u(rng) < 0.9;
  s.qa = u(rng);
  s.ar = u(rng);
  s.sv = 3 * u(rng);
  s.cp = 6 * u(rng);
  s.mc = 6 * u(rng);
  s.st = 4 * u(rng);
  return s;
}

const std::set<Component> kAll(std::begin(kAllComponents),
                               std::end(kAllComponents));

TEST(AggregateTest, FormulaOracle) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const ComponentScores s = RandomScores(rng);
    EXPECT_NEAR(AggregateReward(s, kAll), FormulaOracle(s), 1e-12);
  }
}

TEST(AggregateTest, Examples) {
  ComponentScores max{true, 1, 1, 3, 6, 6, 4};
  EXPECT_EQ(AggregateReward(max, kAll), 1.0);
  ComponentScores half{true, 0.5, 1, 1.5, 3, 3, 2};
  EXPECT_NEAR(AggregateReward(half, kAll), 3.5 / 6.0, 1e-15);
  max.json_valid = false;
  EXPECT_EQ(AggregateReward(max, kAll), 0.0);
}

TEST(AggregateTest, DisabledComponentsLeaveNumeratorAndDivisor) {
  const ComponentScores s{true, 0.5, 1.0, 3, 6, 0, 4};
  std::set<Component> enabled = kAll;
  enabled.erase(Component::kMovement);
  EXPECT_NEAR(AggregateReward(s, enabled), (0.5 + 1 + 1 + 1 + 1) / 5.0, 1e-15);
  enabled.erase(Component::kGrounding);
  EXPECT_EQ(AggregateReward(s, enabled), 1.0);
}

TEST(ConfigTest, DefaultsRoundTrip) {
  const RewardConfig defaults;
  auto parsed = ParseConfig(ConfigToJson(defaults));
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(ConfigId(*parsed), ConfigId(defaults));
  EXPECT_EQ(ConfigId(defaults).size(), 16u);
}

TEST(ConfigTest, OverridesChangeId) {
  auto parsed = ParseConfig(R"({"k": 3, "tau": 0.25})");
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(parsed->composition.k, 3);
  EXPECT_EQ(parsed->composition.tau, 0.25);
  EXPECT_NE(ConfigId(*parsed), ConfigId(RewardConfig{}));
}

TEST(ConfigTest, Rejections) {
  EXPECT_FALSE(ParseConfig("{").ok());
  EXPECT_FALSE(ParseConfig(R"({"kk": 2})").ok());
  EXPECT_FALSE(ParseConfig(R"({"k": 0})").ok());
  EXPECT_FALSE(ParseConfig(R"({"k": 2.5})").ok());
  EXPECT_FALSE(ParseConfig(R"({"delta": 1.0})").ok());
  EXPECT_FALSE(ParseConfig(R"({"reject_threshold": 1.5})").ok());
  EXPECT_FALSE(ParseConfig(R"({"enabled_components": ["qa"]})").ok());
}

TEST(ConfigTest, EnabledComponents) {
  auto parsed = ParseConfig(R"({"enabled_components": ["grounding", "movement"]})");
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(parsed->enabled,
            (std::set<Component>{Component::kGrounding, Component::kMovement}));
  for (Component c : kAllComponents) {
    auto back = ComponentFromName(ComponentName(c));
    ASSERT_TRUE(back.ok());
    EXPECT_EQ(*back, c);
  }
}

TEST(EvaluatorTest, MalformedScoresZero) {
  const TaskBundle bundle = testing::MakeBundle({{"1", "A"}});
  const RewardBreakdown b = ScoreCandidate("{not json", bundle, {});
  EXPECT_EQ(b.r, 0.0);
  ASSERT_TRUE(b.failure.has_value());
  EXPECT_EQ(b.failure->kind, ValidityKind::kMalformedSyntax);
  EXPECT_FALSE(b.raw.json_valid);
  EXPECT_EQ(b.config_id, ConfigId(RewardConfig{}));
}

TEST(EvaluatorTest, OracleLayoutScoresOne) {
  const TaskBundle bundle = GenBundle(5);
  const OracleResult oracle = GenGreedyOracle(bundle);
  ASSERT_TRUE(oracle.exact);
  const RewardBreakdown b = ScoreCandidate(oracle.raw, bundle, {});
  EXPECT_EQ(b.r, 1.0);
  EXPECT_FALSE(b.failure.has_value());
  EXPECT_EQ(b.macro_avg, 1.0);
}

TEST(EvaluatorTest, BreakdownMatchesFormula) {
  std::mt19937_64 rng(99);
  for (uint64_t seed = 0; seed < 30; ++seed) {
    const TaskBundle bundle = GenBundle(seed);
    const RewardBreakdown b =
        ScoreCandidate(GenRandom(bundle, seed, 0.5), bundle, {});
    ASSERT_FALSE(b.failure.has_value());
    EXPECT_NEAR(b.r, FormulaOracle(b.raw), 1e-12);
    EXPECT_NEAR(b.macro_avg,
                (b.normalized.qa + b.normalized.ar + b.normalized.sv +
                 b.normalized.cp + b.normalized.mc + b.normalized.st) /
                    6.0,
                1e-12);
    EXPECT_GE(b.r, 0.0);
    EXPECT_LE(b.r, 1.0);
  }
}

TEST(EvaluatorTest, AblationKeepsFullSuiteColumns) {
  const TaskBundle bundle = GenBundle(8, {3, 3, 12, 12});
  const std::string raw = GenRandom(bundle, 1, 0.4);
  const RewardBreakdown full = ScoreCandidate(raw, bundle, {});
  for (Component c : kAllComponents) {
    RewardConfig config;
    config.enabled.erase(c);
    const RewardBreakdown ablated = ScoreCandidate(raw, bundle, config);
    EXPECT_NE(ablated.r, full.r) << ComponentName(c);
    EXPECT_EQ(ablated.normalized.qa, full.normalized.qa);
    EXPECT_EQ(ablated.normalized.sv, full.normalized.sv);
    EXPECT_EQ(ablated.normalized.cp, full.normalized.cp);
    EXPECT_EQ(ablated.normalized.mc, full.normalized.mc);
    EXPECT_EQ(ablated.normalized.st, full.normalized.st);
    EXPECT_NE(ablated.config_id, full.config_id);
  }
}

TEST(EvaluatorTest, SubchecksReported) {
  const TaskBundle bundle = GenBundle(3);
  const RewardBreakdown b =
      ScoreCandidate(GenRandom(bundle, 3, 0.5), bundle, {});
  EXPECT_EQ(b.subchecks.size(), 9u + 5u + 4u);
  for (const auto& [name, value] : b.subchecks) {
    EXPECT_GE(value, 0.0) << name;
    EXPECT_LE(value, 1.0) << name;
  }
}

}  // namespace
}  // namespace stagescore
