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

// The 3x3 stage grid. Coordinates are in audience view: lateral x is -1 for
// stage left, 0 for center and +1 for stage right; depth d is 0 for the front
// (downstage) row, 1 for the middle row and 2 for the back (upstage) row.

#ifndef STAGESCORE_GRID_H_
#define STAGESCORE_GRID_H_

#include <array>
#include <compare>
#include <cstdlib>
#include <string_view>

#include "absl/status/statusor.h"

namespace stagescore {

struct GridPosition {
  int lateral = 0;  // x in {-1, 0, +1}
  int depth = 0;    // d in {0, 1, 2}

  // One of the nine canonical labels, e.g. "front stage center".
  std::string_view label() const;

  // Row-major cell index in [0, 9): depth * 3 + (lateral + 1).
  int cell() const { return depth * 3 + lateral + 1; }

  static GridPosition FromCell(int cell) {
    return GridPosition{cell % 3 - 1, cell / 3};
  }

  friend bool operator==(const GridPosition&, const GridPosition&) = default;
  friend auto operator<=>(const GridPosition&, const GridPosition&) = default;
};

inline constexpr int kGridCells = 9;
inline constexpr int kBackRow = 2;

// All nine labels indexed by GridPosition::cell().
extern const std::array<std::string_view, kGridCells> kPositionLabels;

// Exact, case-sensitive match of one of the nine labels after trimming ASCII
// whitespace. Returns InvalidArgument for anything else.
absl::StatusOr<GridPosition> PositionFromLabel(std::string_view label);

inline int Manhattan(const GridPosition& a, const GridPosition& b) {
  return std::abs(a.lateral - b.lateral) + std::abs(a.depth - b.depth);
}

inline int Chebyshev(const GridPosition& a, const GridPosition& b) {
  const int dx = std::abs(a.lateral - b.lateral);
  const int dd = std::abs(a.depth - b.depth);
  return dx > dd ? dx : dd;
}

// Two characters "face" each other when they stand in different lateral
// columns, or share a column without a full row between them.
inline bool AreFacing(const GridPosition& a, const GridPosition& b) {
  return a.lateral != b.lateral || Chebyshev(a, b) <= 1;
}

}  // namespace stagescore

#endif  // STAGESCORE_GRID_H_
