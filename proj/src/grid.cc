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

#include "stagescore/grid.h"

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "text.h"

namespace stagescore {

const std::array<std::string_view, kGridCells> kPositionLabels = {
    "front stage left",  "front stage center",  "front stage right",
    "middle stage left", "middle stage center", "middle stage right",
    "back stage left",   "back stage center",   "back stage right",
};

std::string_view GridPosition::label() const { return kPositionLabels[cell()]; }

absl::StatusOr<GridPosition> PositionFromLabel(std::string_view label) {
  const std::string_view trimmed = TrimWhitespace(label);
  for (int cell = 0; cell < kGridCells; ++cell) {
    if (kPositionLabels[cell] == trimmed) return GridPosition::FromCell(cell);
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown stage position label '", AsAbsl(trimmed), "'"));
}

}  // namespace stagescore
