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

// The validity-gated scalar reward.
//
//   r = valid * (QA + AR + SV/3 + CP/6 + MC/6 + ST/4) / 6
//
// Components can be switched off for reward ablations; a disabled component
// drops out of both the numerator and the divisor (QA and AR switch
// together). Breakdowns always report every component, so evaluation stays
// full-suite while the reward is ablated.

#ifndef STAGESCORE_REWARD_H_
#define STAGESCORE_REWARD_H_

#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "stagescore/composition.h"
#include "stagescore/movement.h"
#include "stagescore/scene_transitions.h"
#include "stagescore/stage_play.h"
#include "stagescore/subchecks.h"
#include "stagescore/task_bundle.h"

namespace stagescore {

enum class Component {
  kGrounding,             // QA + AR
  kStageValidity,         // SV
  kCharacterPositioning,  // CP
  kMovement,              // MC
  kSceneTransitions,      // ST
};

inline constexpr Component kAllComponents[] = {
    Component::kGrounding, Component::kStageValidity,
    Component::kCharacterPositioning, Component::kMovement,
    Component::kSceneTransitions};

// "grounding", "stage_validity", "character_positioning", "movement",
// "scene_transitions".
std::string_view ComponentName(Component component);
absl::StatusOr<Component> ComponentFromName(std::string_view name);

struct RewardConfig {
  std::set<Component> enabled{std::begin(kAllComponents),
                              std::end(kAllComponents)};
  CompositionParams composition;
  MovementParams movement;
  SceneParams scene;
  double reject_threshold = 0.8;
};

absl::Status ValidateConfig(const RewardConfig& config);

// Human-editable JSON config. Every field is optional; missing fields keep
// their defaults:
//   {"k": 2, "delta": 0.4, "tau": 0.5, "lambda": 0.5, "gamma": 0.5,
//    "rho_max": 0.5, "run_length": 6, "max_scene_length": 30,
//    "reject_threshold": 0.8, "enabled_components": ["grounding", ...]}
absl::StatusOr<RewardConfig> ParseConfig(std::string_view text);

// Applies the fields present in `overrides` (same schema as ParseConfig) on
// top of `base`.
absl::StatusOr<RewardConfig> ApplyConfigOverrides(const RewardConfig& base,
                                                  std::string_view overrides);

// Canonical JSON text of every config field.
std::string ConfigToJson(const RewardConfig& config);

// First 16 hex digits of the SHA-256 of ConfigToJson().
std::string ConfigId(const RewardConfig& config);

struct ComponentScores {
  bool json_valid = false;
  double qa = 0.0;  // [0, 1]
  double ar = 0.0;  // [0, 1]
  double sv = 0.0;  // [0, 3]
  double cp = 0.0;  // [0, 6]
  double mc = 0.0;  // [0, 6]
  double st = 0.0;  // [0, 4]
};

// Each component scaled to [0, 1].
struct NormalizedScores {
  double qa = 0.0;
  double ar = 0.0;
  double sv = 0.0;
  double cp = 0.0;
  double mc = 0.0;
  double st = 0.0;

  double MacroAverage() const { return (qa + ar + sv + cp + mc + st) / 6.0; }
};

NormalizedScores Normalize(const ComponentScores& scores);

// Gated mean of the enabled normalized components. With nothing enabled the
// reward is the validity gate alone.
double AggregateReward(const ComponentScores& scores,
                       const std::set<Component>& enabled);

struct RewardBreakdown {
  double r = 0.0;
  ComponentScores raw;
  NormalizedScores normalized;
  double macro_avg = 0.0;  // of the normalized components, validity excluded
  double s_move = 0.0;     // movement diagnostic, not part of r
  std::string config_id;
  std::optional<ValidityFailure> failure;
  Subchecks subchecks;  // every scorer's subchecks, empty on gate failure
};

// Scores candidates under a fixed config. Cheap to copy; safe to share across
// threads.
class Evaluator {
 public:
  explicit Evaluator(RewardConfig config = {});

  const RewardConfig& config() const { return config_; }
  const std::string& config_id() const { return config_id_; }

  // Parse, gate, score and aggregate.
  RewardBreakdown Score(std::string_view raw, const TaskBundle& bundle) const;

  // Scores an already parsed (and therefore valid) play.
  RewardBreakdown ScorePlay(const StagePlay& play,
                            const TaskBundle& bundle) const;

 private:
  RewardConfig config_;
  std::string config_id_;
};

RewardBreakdown ScoreCandidate(std::string_view raw, const TaskBundle& bundle,
                               const RewardConfig& config);

}  // namespace stagescore

#endif  // STAGESCORE_REWARD_H_
