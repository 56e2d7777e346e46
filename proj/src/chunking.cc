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

#include "stagescore/chunking.h"

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "stagescore/task_bundle.h"

namespace stagescore {

absl::StatusOr<std::vector<std::string>> ChunkPassage(std::string_view text,
                                                      int max_units) {
  if (max_units < 1) {
    return absl::InvalidArgumentError("max_units must be >= 1");
  }
  auto spans = FindQuoteSpans(text);
  if (!spans.ok()) return spans.status();
  if (text.empty()) return std::vector<std::string>{};

  const auto is_space = [&](size_t i) {
    return absl::ascii_isspace(static_cast<unsigned char>(text[i]));
  };
  // End offset of each unit, trailing whitespace included.
  std::vector<size_t> unit_end;
  size_t pos = 0;
  while (pos < text.size() && is_space(pos)) ++pos;
  while (pos < text.size()) {
    while (pos < text.size() && !is_space(pos)) ++pos;
    while (pos < text.size() && is_space(pos)) ++pos;
    unit_end.push_back(pos);
  }
  if (unit_end.empty()) return std::vector<std::string>{std::string(text)};

  const auto can_split_at = [&](size_t offset) {
    for (const QuoteSpan& span : *spans) {
      if (span.begin < offset && offset < span.end) return false;
    }
    return true;
  };

  std::vector<std::string> windows;
  const size_t units = unit_end.size();
  const size_t limit = static_cast<size_t>(max_units);
  size_t first = 0;  // first unit of the current window
  size_t offset = 0;
  while (first < units) {
    size_t last = units - 1;
    if (units - first > limit) {
      last = first + limit - 1;
      while (last > first && !can_split_at(unit_end[last])) --last;
      if (!can_split_at(unit_end[last])) {
        // A single span longer than the limit: grow past it.
        last = first + limit - 1;
        while (last + 1 < units && !can_split_at(unit_end[last])) ++last;
      }
    }
    windows.emplace_back(text.substr(offset, unit_end[last] - offset));
    offset = unit_end[last];
    first = last + 1;
  }
  return windows;
}

}  // namespace stagescore
