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

#include "stagescore/grounding.h"

#include <string_view>
#include <unordered_map>

namespace stagescore {

GroundingScores ScoreGrounding(const StagePlay& play,
                               const TaskBundle& bundle) {
  std::unordered_map<std::string_view, std::string_view> predicted;
  for (const Scene& scene : play.scenes) {
    for (const Placement& p : scene.placements) {
      predicted.emplace(p.quote_id, p.speaker);
    }
  }

  GroundingScores scores;
  int correct = 0;
  int resolved = 0;
  for (const std::string& quote_id : bundle.ReferenceQuoteIds()) {
    QuoteGrounding q{quote_id, false, false};
    if (const auto it = predicted.find(quote_id); it != predicted.end()) {
      const std::string& reference = bundle.reference_speakers.at(quote_id);
      q.attributed_correctly = it->second == reference;
      q.alias_resolved =
          bundle.canonical_names.contains(std::string(it->second));
    }
    correct += q.attributed_correctly;
    resolved += q.alias_resolved;
    scores.per_quote.push_back(std::move(q));
  }
  if (scores.per_quote.empty()) {
    scores.qa = scores.ar = 1.0;
  } else {
    const double n = static_cast<double>(scores.per_quote.size());
    scores.qa = correct / n;
    scores.ar = resolved / n;
  }
  return scores;
}

}  // namespace stagescore
