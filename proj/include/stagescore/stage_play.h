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

// Stage-play layouts: the object every scorer consumes.
//
// A candidate layout is a JSON object with keys "scene_1" .. "scene_K". Each
// scene holds an optional "room_dimensions" / "room_material" pair and a
// "play" object mapping quote ids to [speaker, position label] pairs:
//
//   {"scene_1": {"room_dimensions": "15ft x 12ft x 8ft",
//                "room_material": "brick walls with iron sconces",
//                "play": {"4054": ["Monks", "back stage left"]}}}
//
// ParseStagePlay() is the validity gate. It never throws; anything that is
// not a well-formed layout comes back as a ValidityFailure.

#ifndef STAGESCORE_STAGE_PLAY_H_
#define STAGESCORE_STAGE_PLAY_H_

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stagescore/grid.h"

namespace stagescore {

struct Placement {
  std::string quote_id;
  std::string speaker;
  GridPosition position;

  friend bool operator==(const Placement&, const Placement&) = default;
};

struct Scene {
  int index = 1;  // N of the "scene_N" key
  std::optional<std::string> room_dimensions;
  std::optional<std::string> room_material;
  std::vector<Placement> placements;  // emission order

  friend bool operator==(const Scene&, const Scene&) = default;
};

struct StagePlay {
  std::vector<Scene> scenes;

  int TotalPlacements() const;

  friend bool operator==(const StagePlay&, const StagePlay&) = default;
};

enum class ValidityKind {
  kMalformedSyntax,
  kSchemaViolation,
  kUnknownPositionLabel,
  kDuplicateQuoteId,
  kEmptyPlay,
};

std::string_view ValidityKindName(ValidityKind kind);

struct ValidityFailure {
  ValidityKind kind = ValidityKind::kMalformedSyntax;
  std::string detail;
};

using ParsedStagePlay = std::variant<StagePlay, ValidityFailure>;

// Strict parse of a candidate layout. Scene keys must be scene_1..scene_K,
// contiguous and in order; extra top-level keys are rejected while extra
// keys inside a scene are ignored. Quote ids, speakers and labels are
// compared after trimming ASCII whitespace. Every scene needs a non-empty
// "play" object.
ParsedStagePlay ParseStagePlay(std::string_view raw);

// Compact JSON text that ParseStagePlay() maps back to `play`.
std::string SerializeStagePlay(const StagePlay& play);

// Positions of one speaker through the play, keyed by global quote index
// (0-based position of the quote in the whole play).
struct CharacterTimeline {
  struct Step {
    int quote_index = 0;
    GridPosition position;
  };
  std::string character;
  std::vector<Step> steps;
};

// One timeline per distinct speaker, ordered by first appearance.
std::vector<CharacterTimeline> ExtractTimelines(const StagePlay& play);

}  // namespace stagescore

#endif  // STAGESCORE_STAGE_PLAY_H_
