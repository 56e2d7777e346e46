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

// Verifier-driven selection: Best-of-N, threshold filtering, SFT dataset
// construction and group-normalized advantages.

#ifndef STAGESCORE_SELECTION_H_
#define STAGESCORE_SELECTION_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "stagescore/records.h"
#include "stagescore/reward.h"
#include "stagescore/task_bundle.h"

namespace stagescore {

struct CandidateSet {
  std::string bundle_id;
  std::vector<std::string> candidates;  // generation order
};

// Groups candidate lines by bundle id (first-appearance order) and orders
// each group by candidate_index. Indices within a bundle must be exactly
// 0..N-1.
absl::StatusOr<std::vector<CandidateSet>> GroupCandidates(
    const std::vector<CandidateLine>& lines);

struct ScoredCandidate {
  int index = 0;
  RewardBreakdown breakdown;
};

// Scores every candidate; result i belongs to candidate i whatever the
// thread count (0 = one worker per hardware thread).
std::vector<RewardBreakdown> ScoreCandidates(
    const std::vector<std::string>& candidates, const TaskBundle& bundle,
    const Evaluator& evaluator, int threads = 1);

// Index of the largest reward, lowest index on ties. Requires non-empty input.
int ArgmaxReward(const std::vector<double>& rewards);

// Highest-reward candidate among the first `n` (all when n <= 0).
// Requires at least one candidate.
ScoredCandidate BestOfN(const CandidateSet& set, const TaskBundle& bundle,
                        const Evaluator& evaluator, int n = 0,
                        int threads = 1);

// Candidates with r >= threshold, in original order.
std::vector<ScoredCandidate> RejectionFilter(const CandidateSet& set,
                                             const TaskBundle& bundle,
                                             const Evaluator& evaluator,
                                             double threshold,
                                             int threads = 1);

struct SftRecord {
  std::string bundle_id;
  std::string passage;
  std::string candidate;
  double r = 0.0;
  int candidate_index = 0;
  std::string config_id;
};

std::string SerializeSftRecord(const SftRecord& record);

struct SftDataset {
  std::vector<SftRecord> records;
  int emitted = 0;
  int skipped = 0;
};

// For each set (in order): keep the first `n_use` candidates, drop those
// below `threshold` (gate failures score 0) and emit the best survivor.
// Every set needs a matching bundle and at least n_use candidates.
absl::StatusOr<SftDataset> BuildSftDataset(
    const std::vector<TaskBundle>& bundles,
    const std::vector<CandidateSet>& sets, const Evaluator& evaluator,
    int n_use, double threshold, int threads = 1);

inline constexpr double kDefaultAdvantageEpsilon = 1e-8;

struct AdvantageVector {
  std::vector<double> rewards;
  std::vector<double> advantages;
  double epsilon = kDefaultAdvantageEpsilon;
};

// A_i = (r_i - mean) / max(population std, epsilon). Groups whose rewards
// are all equal map to exact zeros.
AdvantageVector GroupAdvantages(const std::vector<double>& rewards,
                                double epsilon = kDefaultAdvantageEpsilon);

}  // namespace stagescore

#endif  // STAGESCORE_SELECTION_H_
