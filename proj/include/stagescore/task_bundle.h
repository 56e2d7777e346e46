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

#ifndef STAGESCORE_TASK_BUNDLE_H_
#define STAGESCORE_TASK_BUNDLE_H_

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace stagescore {

// A marked quotation `|id| ... ||id||` inside a passage. Offsets are byte
// offsets into the passage; [begin, end) covers both markers.
struct QuoteSpan {
  std::string id;
  size_t begin = 0;
  size_t end = 0;
};

// Scans a passage for quote markers. An id is a run of characters other than
// '|' and whitespace. A '|' that does not start a marker is ordinary text.
// Spans may not nest or interleave and every opening marker needs its
// closing marker.
absl::StatusOr<std::vector<QuoteSpan>> FindQuoteSpans(std::string_view passage);

// One evaluation unit: a marked passage plus its reference annotations.
struct TaskBundle {
  std::string bundle_id;
  std::string passage;
  std::vector<std::string> quote_ids;        // passage order
  std::set<std::string> canonical_names;
  std::map<std::string, std::string> alias_map;           // alias -> canonical
  std::map<std::string, std::string> reference_speakers;  // quote id -> name

  // Reference quote ids in passage order.
  std::vector<std::string> ReferenceQuoteIds() const;
};

// Parses the bundle file format:
//   {"bundle_id": "...", "passage": "...", "quote_ids": [...],
//    "canonical_names": [...], "alias_map": {...},
//    "reference_speakers": {...}}
// Quote ids may be given as strings or non-negative integers. The ids marked
// in the passage must equal `quote_ids`, in order.
absl::StatusOr<TaskBundle> ParseTaskBundle(std::string_view raw);

// Checks the cross-field invariants that ParseTaskBundle() enforces.
absl::Status ValidateTaskBundle(const TaskBundle& bundle);

std::string SerializeTaskBundle(const TaskBundle& bundle);

}  // namespace stagescore

#endif  // STAGESCORE_TASK_BUNDLE_H_
