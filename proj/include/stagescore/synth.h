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

// Model-free generators for bundles and candidates. All output is a pure
// function of the arguments and the seed (see rng.h for the algorithm).

#ifndef STAGESCORE_SYNTH_H_
#define STAGESCORE_SYNTH_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "stagescore/stage_play.h"
#include "stagescore/task_bundle.h"

namespace stagescore {

struct BundleSpec {
  int min_characters = 1;
  int max_characters = 6;
  int min_quotes = 5;
  int max_quotes = 40;
};

// A synthetic bundle. Speakers follow a Zipf-like activity profile with the
// most active speaker holding at least three quotes, every quote has a
// reference speaker, and two non-speaking canonical names are added so that a
// wrong canonical attribution always exists.
TaskBundle GenBundle(uint64_t seed, const BundleSpec& spec = {});

// One scene, positions uniform over the grid. Each quote goes to its
// reference speaker with probability p_correct and otherwise to a uniformly
// drawn canonical name (possibly the right one). Always passes the gate.
std::string GenRandom(const TaskBundle& bundle, uint64_t seed,
                      double p_correct);

enum class PerturbationKind {
  kMisattributeQuote,    // targets quote attribution
  kUpstagePrimary,       // targets stage validity (proxemics)
  kInjectDepthThrash,    // targets movement
  kDuplicatePrimaryCell, // targets character positioning (distinct cells)
  kSplitSceneSameRoom,   // targets scene transitions
  kDropQuote,            // targets stage validity (coverage)
};

inline constexpr PerturbationKind kAllPerturbations[] = {
    PerturbationKind::kMisattributeQuote,
    PerturbationKind::kUpstagePrimary,
    PerturbationKind::kInjectDepthThrash,
    PerturbationKind::kDuplicatePrimaryCell,
    PerturbationKind::kSplitSceneSameRoom,
    PerturbationKind::kDropQuote};

std::string_view PerturbationName(PerturbationKind kind);
absl::StatusOr<PerturbationKind> PerturbationFromName(std::string_view name);

struct PerturbationResult {
  StagePlay play;
  std::string raw;
  std::vector<PerturbationKind> applied;
  std::vector<std::string> notices;  // one per skipped draw
};

// Applies `count` perturbations, each drawn uniformly from `kinds`. A kind
// that cannot apply to the current play is skipped with a notice. `k` is the
// primary-character count used to pick targets for the primary kinds.
PerturbationResult GenPerturbed(const StagePlay& base, const TaskBundle& bundle,
                                const std::vector<PerturbationKind>& kinds,
                                int count, uint64_t seed, int k = 2);

}  // namespace stagescore

#endif  // STAGESCORE_SYNTH_H_
