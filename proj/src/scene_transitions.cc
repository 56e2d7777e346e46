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

#include "stagescore/scene_transitions.h"

#include <algorithm>
#include <charconv>
#include <optional>
#include <string_view>

#include "absl/strings/ascii.h"
#include "stagescore/grid.h"
#include "stagescore/scene_cast.h"

namespace stagescore {
namespace {

bool IsSeparator(char c) { return c == 'x' || c == 'X'; }
bool IsUnitChar(char c) {
  return absl::ascii_isalpha(static_cast<unsigned char>(c)) || c == '\'' ||
         c == '"';
}

void SkipSpace(std::string_view text, size_t& pos) {
  while (pos < text.size() &&
         absl::ascii_isspace(static_cast<unsigned char>(text[pos]))) {
    ++pos;
  }
}

// Reads "<number>[unit]" and, unless `last`, the following separator.
std::optional<double> ReadDimension(std::string_view text, size_t& pos,
                                    bool last) {
  SkipSpace(text, pos);
  size_t end = pos;
  while (end < text.size() &&
         (absl::ascii_isdigit(static_cast<unsigned char>(text[end])) ||
          text[end] == '.')) {
    ++end;
  }
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data() + pos, text.data() + end, value);
  if (ec != std::errc() || ptr != text.data() + end) return std::nullopt;
  pos = end;
  SkipSpace(text, pos);

  size_t unit_end = pos;
  while (unit_end < text.size() && IsUnitChar(text[unit_end])) ++unit_end;
  if (!last) {
    size_t after = unit_end;
    SkipSpace(text, after);
    const bool separator_follows = after < text.size() && IsSeparator(text[after]);
    // "15x12" or "15ftx12": the trailing x of the unit run is the separator.
    if (!separator_follows && unit_end > pos && IsSeparator(text[unit_end - 1])) {
      --unit_end;
    }
    pos = unit_end;
    SkipSpace(text, pos);
    if (pos >= text.size() || !IsSeparator(text[pos])) return std::nullopt;
    ++pos;
  } else {
    pos = unit_end;
    SkipSpace(text, pos);
  }
  return value;
}

std::string Trimmed(const std::optional<std::string>& field) {
  return field ? std::string(absl::StripAsciiWhitespace(*field)) : "";
}

int BackRowOrSame(const GridPosition& first, const GridPosition& previous,
                  bool same_room) {
  if (same_room) return first == previous;
  return first.depth == kBackRow || first == previous;
}

}  // namespace

RoomSpec ParseRoomSpec(const Scene& scene) {
  RoomSpec spec;
  spec.material = Trimmed(scene.room_material);
  if (!scene.room_dimensions) return spec;
  const std::string_view text = *scene.room_dimensions;
  size_t pos = 0;
  const auto width = ReadDimension(text, pos, false);
  const auto height = width ? ReadDimension(text, pos, false) : std::nullopt;
  const auto depth = height ? ReadDimension(text, pos, true) : std::nullopt;
  if (!depth || pos != text.size()) return spec;
  spec.width = *width;
  spec.height = *height;
  spec.depth = *depth;
  spec.well_formed = spec.width > 0 && spec.height > 0 && spec.depth > 0 &&
                     !spec.material.empty();
  return spec;
}

bool SameRoom(const Scene& a, const Scene& b) {
  const RoomSpec ra = ParseRoomSpec(a);
  const RoomSpec rb = ParseRoomSpec(b);
  if (ra.well_formed && rb.well_formed) {
    return ra.width == rb.width && ra.height == rb.height &&
           ra.depth == rb.depth && ra.material == rb.material;
  }
  return Trimmed(a.room_dimensions) == Trimmed(b.room_dimensions) &&
         Trimmed(a.room_material) == Trimmed(b.room_material) &&
         a.room_dimensions.has_value() == b.room_dimensions.has_value() &&
         a.room_material.has_value() == b.room_material.has_value();
}

SceneTransitionScores ScoreSceneTransitions(const StagePlay& play,
                                            const SceneParams& params) {
  SceneTransitionScores scores;
  const size_t scene_count = play.scenes.size();

  std::vector<SceneCast> casts;
  std::vector<RoomSpec> rooms;
  for (const Scene& scene : play.scenes) {
    casts.push_back(SceneCast::Of(scene));
    rooms.push_back(ParseRoomSpec(scene));
  }

  int credited_boundaries = 0;
  int entrants = 0, entrants_upstage = 0;
  int carried = 0, carried_consistent = 0;
  for (size_t s = 1; s < scene_count; ++s) {
    const Scene& before = play.scenes[s - 1];
    const Scene& after = play.scenes[s];
    const SceneCast& cast_before = casts[s - 1];
    const SceneCast& cast_after = casts[s];

    BoundaryDiagnostic diag;
    diag.before_scene = before.index;
    diag.both_well_formed = rooms[s - 1].well_formed && rooms[s].well_formed;
    const bool same_room = SameRoom(before, after);
    diag.room_changed = !same_room;
    credited_boundaries += diag.both_well_formed && diag.room_changed;

    // Last position of each character in the previous scene.
    std::vector<std::optional<GridPosition>> last(cast_before.characters.size());
    for (size_t t = 0; t < before.placements.size(); ++t) {
      last[cast_before.speaker_of[t]] = before.placements[t].position;
    }
    for (int c = 0; c < cast_after.size(); ++c) {
      const GridPosition& first =
          after.placements[cast_after.first_quote[c]].position;
      const int previous = cast_before.Find(cast_after.characters[c]);
      if (previous < 0) {
        ++diag.entrants;
        diag.entrants_upstage += first.depth == kBackRow;
      } else {
        ++diag.carried_over;
        diag.carried_over_consistent +=
            BackRowOrSame(first, *last[previous], same_room);
      }
    }
    entrants += diag.entrants;
    entrants_upstage += diag.entrants_upstage;
    carried += diag.carried_over;
    carried_consistent += diag.carried_over_consistent;
    scores.per_boundary.push_back(diag);
  }

  const auto ratio = [](int good, int total) {
    return total == 0 ? 1.0 : static_cast<double>(good) / total;
  };
  const double boundaries =
      ratio(credited_boundaries, static_cast<int>(scene_count) - 1);
  const double entrances = ratio(entrants_upstage, entrants);
  const double carry_over = ratio(carried_consistent, carried);
  double length_cap = 1.0;
  if (scene_count > 0) {
    double total = 0.0;
    for (const Scene& scene : play.scenes) {
      const double length = static_cast<double>(scene.placements.size());
      total += length == 0.0
                   ? 1.0
                   : std::min(1.0, params.max_scene_length / length);
    }
    length_cap = total / static_cast<double>(scene_count);
  }

  scores.st = boundaries + entrances + carry_over + length_cap;
  scores.subchecks = {
      {"t1_boundaries", boundaries},
      {"t2_entrants_upstage", entrances},
      {"t3_carry_over", carry_over},
      {"t4_length_cap", length_cap},
  };
  return scores;
}

}  // namespace stagescore
