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

#include "stagescore/stage_play.h"

#include <charconv>
#include <map>
#include <set>
#include <unordered_set>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "text.h"

namespace stagescore {
namespace {

using OrderedJson = nlohmann::ordered_json;

constexpr int kMaxNesting = 64;
constexpr std::string_view kScenePrefix = "scene_";

struct NestingTooDeep {};

// Tracks object keys while the JSON parser runs so that duplicate keys, which
// nlohmann would silently collapse, are still observable.
class DuplicateKeyTracker {
 public:
  struct Duplicate {
    std::string key;
    bool inside_play = false;
  };

  bool operator()(int /*depth*/, OrderedJson::parse_event_t event,
                  OrderedJson& parsed) {
    using Event = OrderedJson::parse_event_t;
    switch (event) {
      case Event::object_start:
      case Event::array_start: {
        Frame frame;
        frame.is_object = event == Event::object_start;
        if (!frames_.empty() && frames_.back().is_object) {
          frame.opened_under = frames_.back().last_key;
        }
        frames_.push_back(std::move(frame));
        if (frames_.size() > kMaxNesting) throw NestingTooDeep{};
        break;
      }
      case Event::object_end:
      case Event::array_end:
        if (!frames_.empty()) frames_.pop_back();
        break;
      case Event::key: {
        if (frames_.empty()) break;
        Frame& top = frames_.back();
        top.last_key = parsed.get<std::string>();
        if (!top.keys.insert(top.last_key).second && !duplicate_) {
          // root -> scene -> play
          const bool inside_play = frames_.size() == 3 &&
                                   frames_[0].is_object &&
                                   top.opened_under == "play";
          duplicate_ = Duplicate{top.last_key, inside_play};
        }
        break;
      }
      case Event::value:
        break;
    }
    return true;
  }

  const std::optional<Duplicate>& duplicate() const { return duplicate_; }

 private:
  struct Frame {
    bool is_object = false;
    std::set<std::string> keys;
    std::string last_key;
    std::string opened_under;
  };
  std::vector<Frame> frames_;
  std::optional<Duplicate> duplicate_;
};

ValidityFailure Fail(ValidityKind kind, std::string detail) {
  return ValidityFailure{kind, std::move(detail)};
}

// "scene_N" with N a positive integer without leading zeros.
std::optional<int> SceneIndexFromKey(std::string_view key) {
  if (key.substr(0, kScenePrefix.size()) != kScenePrefix) return std::nullopt;
  const std::string_view digits = key.substr(kScenePrefix.size());
  if (digits.empty() || digits.front() == '0') return std::nullopt;
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    return std::nullopt;
  }
  return value;
}

std::optional<ValidityFailure> ReadRoomField(const OrderedJson& scene,
                                             const char* field,
                                             std::string_view scene_key,
                                             std::optional<std::string>* out) {
  const auto it = scene.find(field);
  if (it == scene.end()) return std::nullopt;
  if (!it->is_string()) {
    return Fail(ValidityKind::kSchemaViolation,
                absl::StrCat(AsAbsl(scene_key), ".", field, " must be a string"));
  }
  *out = it->get<std::string>();
  return std::nullopt;
}

ParsedStagePlay ValidateDocument(const OrderedJson& root) {
  if (!root.is_object()) {
    return Fail(ValidityKind::kSchemaViolation,
                "top-level value must be an object");
  }
  if (root.empty()) {
    return Fail(ValidityKind::kEmptyPlay, "no scenes");
  }
  StagePlay play;
  std::unordered_set<std::string> seen_ids;
  int expected_index = 1;
  for (const auto& [key, value] : root.items()) {
    const std::optional<int> index = SceneIndexFromKey(key);
    if (!index) {
      return Fail(ValidityKind::kSchemaViolation,
                  absl::StrCat("unexpected top-level key '", key, "'"));
    }
    if (*index != expected_index) {
      return Fail(ValidityKind::kSchemaViolation,
                  absl::StrCat("expected scene_", expected_index, ", found '",
                               key, "'"));
    }
    ++expected_index;
    if (!value.is_object()) {
      return Fail(ValidityKind::kSchemaViolation,
                  absl::StrCat(key, " must be an object"));
    }
    Scene scene;
    scene.index = *index;
    if (auto failure = ReadRoomField(value, "room_dimensions", key,
                                     &scene.room_dimensions)) {
      return *failure;
    }
    if (auto failure =
            ReadRoomField(value, "room_material", key, &scene.room_material)) {
      return *failure;
    }
    const auto play_it = value.find("play");
    if (play_it == value.end() || !play_it->is_object()) {
      return Fail(ValidityKind::kSchemaViolation,
                  absl::StrCat(key, ".play must be an object"));
    }
    if (play_it->empty()) {
      return Fail(ValidityKind::kEmptyPlay,
                  absl::StrCat(key, ".play has no quotes"));
    }
    for (const auto& [raw_id, entry] : play_it->items()) {
      const std::string quote_id(absl::StripAsciiWhitespace(raw_id));
      if (quote_id.empty()) {
        return Fail(ValidityKind::kSchemaViolation,
                    absl::StrCat(key, " has an empty quote id"));
      }
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
          !entry[1].is_string()) {
        return Fail(ValidityKind::kSchemaViolation,
                    absl::StrCat("quote ", quote_id,
                                 " must map to [speaker, position]"));
      }
      std::string speaker(
          absl::StripAsciiWhitespace(entry[0].get_ref<const std::string&>()));
      if (speaker.empty()) {
        return Fail(ValidityKind::kSchemaViolation,
                    absl::StrCat("quote ", quote_id, " has an empty speaker"));
      }
      auto position =
          PositionFromLabel(entry[1].get_ref<const std::string&>());
      if (!position.ok()) {
        return Fail(ValidityKind::kUnknownPositionLabel,
                    absl::StrCat("quote ", quote_id, ": ",
                                 position.status().message()));
      }
      if (!seen_ids.insert(quote_id).second) {
        return Fail(ValidityKind::kDuplicateQuoteId,
                    absl::StrCat("quote id '", quote_id, "' repeated"));
      }
      scene.placements.push_back(
          Placement{quote_id, std::move(speaker), *position});
    }
    play.scenes.push_back(std::move(scene));
  }
  return play;
}

}  // namespace

int StagePlay::TotalPlacements() const {
  int total = 0;
  for (const Scene& scene : scenes) {
    total += static_cast<int>(scene.placements.size());
  }
  return total;
}

std::string_view ValidityKindName(ValidityKind kind) {
  switch (kind) {
    case ValidityKind::kMalformedSyntax:
      return "malformed_syntax";
    case ValidityKind::kSchemaViolation:
      return "schema_violation";
    case ValidityKind::kUnknownPositionLabel:
      return "unknown_position_label";
    case ValidityKind::kDuplicateQuoteId:
      return "duplicate_quote_id";
    case ValidityKind::kEmptyPlay:
      return "empty_play";
  }
  return "unknown";
}

ParsedStagePlay ParseStagePlay(std::string_view raw) {
  DuplicateKeyTracker tracker;
  OrderedJson root;
  try {
    root = OrderedJson::parse(raw.begin(), raw.end(), std::ref(tracker),
                              /*allow_exceptions=*/true,
                              /*ignore_comments=*/false);
  } catch (const NestingTooDeep&) {
    return Fail(ValidityKind::kSchemaViolation,
                absl::StrCat("nesting deeper than ", kMaxNesting));
  } catch (const nlohmann::json::exception& e) {
    return Fail(ValidityKind::kMalformedSyntax, e.what());
  } catch (const std::exception& e) {
    return Fail(ValidityKind::kMalformedSyntax, e.what());
  }
  if (const auto& duplicate = tracker.duplicate()) {
    if (duplicate->inside_play) {
      return Fail(ValidityKind::kDuplicateQuoteId,
                  absl::StrCat("quote id '", duplicate->key, "' repeated"));
    }
    return Fail(ValidityKind::kSchemaViolation,
                absl::StrCat("duplicate key '", duplicate->key, "'"));
  }
  try {
    return ValidateDocument(root);
  } catch (const std::exception& e) {
    return Fail(ValidityKind::kSchemaViolation, e.what());
  }
}

std::string SerializeStagePlay(const StagePlay& play) {
  OrderedJson root = OrderedJson::object();
  for (size_t i = 0; i < play.scenes.size(); ++i) {
    const Scene& scene = play.scenes[i];
    OrderedJson node = OrderedJson::object();
    if (scene.room_dimensions) node["room_dimensions"] = *scene.room_dimensions;
    if (scene.room_material) node["room_material"] = *scene.room_material;
    OrderedJson quotes = OrderedJson::object();
    for (const Placement& p : scene.placements) {
      quotes[p.quote_id] = OrderedJson::array({p.speaker, p.position.label()});
    }
    node["play"] = std::move(quotes);
    root[absl::StrCat(AsAbsl(kScenePrefix), i + 1)] = std::move(node);
  }
  return root.dump();
}

std::vector<CharacterTimeline> ExtractTimelines(const StagePlay& play) {
  std::vector<CharacterTimeline> timelines;
  std::map<std::string, size_t, std::less<>> slot;
  int quote_index = 0;
  for (const Scene& scene : play.scenes) {
    for (const Placement& p : scene.placements) {
      auto [it, inserted] = slot.emplace(p.speaker, timelines.size());
      if (inserted) timelines.push_back(CharacterTimeline{p.speaker, {}});
      timelines[it->second].steps.push_back({quote_index, p.position});
      ++quote_index;
    }
  }
  return timelines;
}

}  // namespace stagescore
