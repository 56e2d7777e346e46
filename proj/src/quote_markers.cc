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

#include <optional>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "stagescore/task_bundle.h"

namespace stagescore {
namespace {

bool IsIdChar(char c) {
  return c != '|' && !absl::ascii_isspace(static_cast<unsigned char>(c));
}

struct Marker {
  std::string id;
  bool closing = false;
  size_t begin = 0;
  size_t end = 0;
};

// Tries to read `|id|` or `||id||` starting at `pos`.
std::optional<Marker> ReadMarker(std::string_view text, size_t pos) {
  const bool closing = pos + 1 < text.size() && text[pos + 1] == '|';
  const size_t bars = closing ? 2 : 1;
  size_t i = pos + bars;
  const size_t id_begin = i;
  while (i < text.size() && IsIdChar(text[i])) ++i;
  if (i == id_begin) return std::nullopt;
  if (text.substr(i, bars) != std::string_view("||", bars)) return std::nullopt;
  return Marker{std::string(text.substr(id_begin, i - id_begin)), closing, pos,
                i + bars};
}

}  // namespace

absl::StatusOr<std::vector<QuoteSpan>> FindQuoteSpans(
    std::string_view passage) {
  std::vector<QuoteSpan> spans;
  std::optional<QuoteSpan> open;
  size_t pos = 0;
  while ((pos = passage.find('|', pos)) != std::string_view::npos) {
    std::optional<Marker> marker = ReadMarker(passage, pos);
    if (!marker) {
      ++pos;
      continue;
    }
    if (!marker->closing) {
      if (open) {
        return absl::InvalidArgumentError(
            absl::StrCat("quote |", marker->id, "| opened inside |", open->id,
                         "| at byte ", pos));
      }
      open = QuoteSpan{marker->id, marker->begin, 0};
    } else {
      if (!open || open->id != marker->id) {
        return absl::InvalidArgumentError(absl::StrCat(
            "closing marker ||", marker->id, "|| without matching opener at byte ",
            pos));
      }
      open->end = marker->end;
      spans.push_back(std::move(*open));
      open.reset();
    }
    pos = marker->end;
  }
  if (open) {
    return absl::InvalidArgumentError(
        absl::StrCat("quote |", open->id, "| is never closed"));
  }
  return spans;
}

}  // namespace stagescore
