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

#ifndef STAGESCORE_GROUNDING_H_
#define STAGESCORE_GROUNDING_H_

#include <string>
#include <vector>

#include "stagescore/stage_play.h"
#include "stagescore/task_bundle.h"

namespace stagescore {

struct QuoteGrounding {
  std::string quote_id;
  bool attributed_correctly = false;
  bool alias_resolved = false;
};

struct GroundingScores {
  double qa = 0.0;  // quote attribution accuracy
  double ar = 0.0;  // alias resolution accuracy
  std::vector<QuoteGrounding> per_quote;  // reference quotes, passage order
};

// Scores every reference quote of `bundle`. A quote is attributed correctly
// when the predicted speaker equals the reference name exactly; its alias is
// resolved when the predicted speaker is any canonical name. Quotes missing
// from the play count as false for both. With no reference quotes both
// fractions are 1.
GroundingScores ScoreGrounding(const StagePlay& play, const TaskBundle& bundle);

}  // namespace stagescore

#endif  // STAGESCORE_GROUNDING_H_
