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

#include <openssl/evp.h>

#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "stagescore/grounding.h"
#include "text.h"

namespace stagescore {
namespace {

using Json = nlohmann::json;

template <typename T>
absl::Status ReadNumber(const Json& root, const char* key, T* out) {
  const auto it = root.find(key);
  if (it == root.end()) return absl::OkStatus();
  if constexpr (std::is_integral_v<T>) {
    if (!it->is_number_integer()) {
      return absl::InvalidArgumentError(
          absl::StrCat("config field '", key, "' must be an integer"));
    }
  } else if (!it->is_number()) {
    return absl::InvalidArgumentError(
        absl::StrCat("config field '", key, "' must be a number"));
  }
  *out = it->get<T>();
  return absl::OkStatus();
}

absl::Status ApplyJson(const Json& root, RewardConfig& config) {
  if (!root.is_object()) {
    return absl::InvalidArgumentError("config must be a JSON object");
  }
  static const std::set<std::string> kKnown = {
      "k",          "delta",            "tau",
      "lambda",     "gamma",            "rho_max",
      "run_length", "max_scene_length", "reject_threshold",
      "enabled_components"};
  for (const auto& [key, value] : root.items()) {
    if (!kKnown.contains(key)) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown config field '", key, "'"));
    }
  }
  for (absl::Status s : {
           ReadNumber(root, "k", &config.composition.k),
           ReadNumber(root, "delta", &config.composition.delta),
           ReadNumber(root, "tau", &config.composition.tau),
           ReadNumber(root, "lambda", &config.movement.lambda),
           ReadNumber(root, "gamma", &config.movement.gamma),
           ReadNumber(root, "rho_max", &config.movement.rho_max),
           ReadNumber(root, "run_length", &config.movement.run_length),
           ReadNumber(root, "max_scene_length", &config.scene.max_scene_length),
           ReadNumber(root, "reject_threshold", &config.reject_threshold),
       }) {
    if (!s.ok()) return s;
  }
  if (const auto it = root.find("enabled_components"); it != root.end()) {
    if (!it->is_array()) {
      return absl::InvalidArgumentError(
          "enabled_components must be an array of names");
    }
    config.enabled.clear();
    for (const Json& name : *it) {
      if (!name.is_string()) {
        return absl::InvalidArgumentError(
            "enabled_components must be an array of names");
      }
      auto component = ComponentFromName(name.get<std::string>());
      if (!component.ok()) return component.status();
      config.enabled.insert(*component);
    }
  }
  return ValidateConfig(config);
}

absl::StatusOr<Json> ParseJsonText(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("config is not valid JSON: ", e.what()));
  }
}

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

}  // namespace

std::string_view ComponentName(Component component) {
  switch (component) {
    case Component::kGrounding:
      return "grounding";
    case Component::kStageValidity:
      return "stage_validity";
    case Component::kCharacterPositioning:
      return "character_positioning";
    case Component::kMovement:
      return "movement";
    case Component::kSceneTransitions:
      return "scene_transitions";
  }
  return "unknown";
}

absl::StatusOr<Component> ComponentFromName(std::string_view name) {
  for (Component c : kAllComponents) {
    if (ComponentName(c) == name) return c;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown component '", AsAbsl(name),
      "' (expected grounding, stage_validity, character_positioning, "
      "movement or scene_transitions)"));
}

absl::Status ValidateConfig(const RewardConfig& config) {
  const auto bad = [](std::string_view what) {
    return absl::InvalidArgumentError(absl::StrCat("config: ", AsAbsl(what)));
  };
  if (config.composition.k < 1) return bad("k must be >= 1");
  if (!(config.composition.delta > 0.0 && config.composition.delta < 1.0)) {
    return bad("delta must lie in (0, 1)");
  }
  if (!(config.composition.tau >= 0.0 && config.composition.tau <= 1.0)) {
    return bad("tau must lie in [0, 1]");
  }
  if (!(config.movement.lambda >= 0.0) || !(config.movement.gamma >= 0.0)) {
    return bad("lambda and gamma must be >= 0");
  }
  if (!(config.movement.rho_max >= 0.0 && config.movement.rho_max < 1.0)) {
    return bad("rho_max must lie in [0, 1)");
  }
  if (config.movement.run_length < 2) return bad("run_length must be >= 2");
  if (config.scene.max_scene_length < 1) {
    return bad("max_scene_length must be >= 1");
  }
  if (!(config.reject_threshold >= 0.0 && config.reject_threshold <= 1.0)) {
    return bad("reject_threshold must lie in [0, 1]");
  }
  return absl::OkStatus();
}

absl::StatusOr<RewardConfig> ParseConfig(std::string_view text) {
  return ApplyConfigOverrides(RewardConfig{}, text);
}

absl::StatusOr<RewardConfig> ApplyConfigOverrides(const RewardConfig& base,
                                                  std::string_view overrides) {
  auto root = ParseJsonText(overrides);
  if (!root.ok()) return root.status();
  RewardConfig config = base;
  if (absl::Status s = ApplyJson(*root, config); !s.ok()) return s;
  return config;
}

std::string ConfigToJson(const RewardConfig& config) {
  nlohmann::ordered_json root;
  root["k"] = config.composition.k;
  root["delta"] = config.composition.delta;
  root["tau"] = config.composition.tau;
  root["lambda"] = config.movement.lambda;
  root["gamma"] = config.movement.gamma;
  root["rho_max"] = config.movement.rho_max;
  root["run_length"] = config.movement.run_length;
  root["max_scene_length"] = config.scene.max_scene_length;
  root["reject_threshold"] = config.reject_threshold;
  auto enabled = nlohmann::ordered_json::array();
  for (Component c : kAllComponents) {
    if (config.enabled.contains(c)) enabled.push_back(ComponentName(c));
  }
  root["enabled_components"] = std::move(enabled);
  return root.dump();
}

std::string ConfigId(const RewardConfig& config) {
  return Sha256Hex(ConfigToJson(config)).substr(0, 16);
}

NormalizedScores Normalize(const ComponentScores& scores) {
  return NormalizedScores{scores.qa,       scores.ar,       scores.sv / 3.0,
                          scores.cp / 6.0, scores.mc / 6.0, scores.st / 4.0};
}

double AggregateReward(const ComponentScores& scores,
                       const std::set<Component>& enabled) {
  if (!scores.json_valid) return 0.0;
  const NormalizedScores n = Normalize(scores);
  double sum = 0.0;
  int terms = 0;
  for (Component c : enabled) {
    switch (c) {
      case Component::kGrounding:
        sum += n.qa + n.ar;
        terms += 2;
        break;
      case Component::kStageValidity:
        sum += n.sv;
        ++terms;
        break;
      case Component::kCharacterPositioning:
        sum += n.cp;
        ++terms;
        break;
      case Component::kMovement:
        sum += n.mc;
        ++terms;
        break;
      case Component::kSceneTransitions:
        sum += n.st;
        ++terms;
        break;
    }
  }
  return terms == 0 ? 1.0 : sum / terms;
}

Evaluator::Evaluator(RewardConfig config)
    : config_(std::move(config)), config_id_(ConfigId(config_)) {}

RewardBreakdown Evaluator::Score(std::string_view raw,
                                 const TaskBundle& bundle) const {
  ParsedStagePlay parsed = ParseStagePlay(raw);
  if (auto* failure = std::get_if<ValidityFailure>(&parsed)) {
    RewardBreakdown breakdown;
    breakdown.config_id = config_id_;
    breakdown.failure = std::move(*failure);
    return breakdown;
  }
  return ScorePlay(std::get<StagePlay>(parsed), bundle);
}

RewardBreakdown Evaluator::ScorePlay(const StagePlay& play,
                                     const TaskBundle& bundle) const {
  const GroundingScores grounding = ScoreGrounding(play, bundle);
  const CompositionScores composition =
      ScoreComposition(play, bundle, config_.composition);
  const MovementScores movement = ScoreMovement(play, config_.movement);
  const SceneTransitionScores scene =
      ScoreSceneTransitions(play, config_.scene);

  RewardBreakdown breakdown;
  breakdown.config_id = config_id_;
  breakdown.raw = ComponentScores{true,          grounding.qa, grounding.ar,
                                  composition.sv, composition.cp, movement.mc,
                                  scene.st};
  breakdown.normalized = Normalize(breakdown.raw);
  breakdown.macro_avg = breakdown.normalized.MacroAverage();
  breakdown.r = AggregateReward(breakdown.raw, config_.enabled);
  breakdown.s_move = movement.s_move_diagnostic;
  breakdown.subchecks.reserve(composition.subchecks.size() +
                              movement.subchecks.size() +
                              scene.subchecks.size());
  for (const Subchecks* group :
       {&composition.subchecks, &movement.subchecks, &scene.subchecks}) {
    breakdown.subchecks.insert(breakdown.subchecks.end(), group->begin(),
                               group->end());
  }
  return breakdown;
}

RewardBreakdown ScoreCandidate(std::string_view raw, const TaskBundle& bundle,
                               const RewardConfig& config) {
  return Evaluator(config).Score(raw, bundle);
}

}  // namespace stagescore
