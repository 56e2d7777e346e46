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

#include "stagescore/selection.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "stagescore/parallel.h"

namespace stagescore {
namespace {

std::vector<std::string> Prefix(const std::vector<std::string>& candidates,
                                int n) {
  if (n <= 0 || n >= static_cast<int>(candidates.size())) return candidates;
  return std::vector<std::string>(candidates.begin(), candidates.begin() + n);
}

}  // namespace

absl::StatusOr<std::vector<CandidateSet>> GroupCandidates(
    const std::vector<CandidateLine>& lines) {
  std::vector<std::string> order;
  std::map<std::string, std::map<int, const CandidateLine*>> grouped;
  for (const CandidateLine& line : lines) {
    auto [it, inserted] = grouped.try_emplace(line.bundle_id);
    if (inserted) order.push_back(line.bundle_id);
    if (!it->second.emplace(line.candidate_index, &line).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("bundle ", line.bundle_id, ": candidate_index ",
                       line.candidate_index, " repeated"));
    }
  }
  std::vector<CandidateSet> sets;
  sets.reserve(order.size());
  for (const std::string& bundle_id : order) {
    const auto& by_index = grouped[bundle_id];
    CandidateSet set{bundle_id, {}};
    int expected = 0;
    for (const auto& [index, line] : by_index) {
      if (index != expected++) {
        return absl::InvalidArgumentError(absl::StrCat(
            "bundle ", bundle_id, ": candidate indices must be 0..",
            by_index.size() - 1, " without gaps"));
      }
      set.candidates.push_back(line->raw_candidate);
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

std::vector<RewardBreakdown> ScoreCandidates(
    const std::vector<std::string>& candidates, const TaskBundle& bundle,
    const Evaluator& evaluator, int threads) {
  std::vector<RewardBreakdown> out(candidates.size());
  ParallelFor(candidates.size(), threads, [&](size_t i) {
    out[i] = evaluator.Score(candidates[i], bundle);
  });
  return out;
}

int ArgmaxReward(const std::vector<double>& rewards) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(rewards.size()); ++i) {
    if (rewards[i] > rewards[best]) best = i;
  }
  return best;
}

ScoredCandidate BestOfN(const CandidateSet& set, const TaskBundle& bundle,
                        const Evaluator& evaluator, int n, int threads) {
  std::vector<RewardBreakdown> scored =
      ScoreCandidates(Prefix(set.candidates, n), bundle, evaluator, threads);
  std::vector<double> rewards;
  rewards.reserve(scored.size());
  for (const RewardBreakdown& b : scored) rewards.push_back(b.r);
  const int best = ArgmaxReward(rewards);
  return ScoredCandidate{best, std::move(scored[best])};
}

std::vector<ScoredCandidate> RejectionFilter(const CandidateSet& set,
                                             const TaskBundle& bundle,
                                             const Evaluator& evaluator,
                                             double threshold, int threads) {
  std::vector<RewardBreakdown> scored =
      ScoreCandidates(set.candidates, bundle, evaluator, threads);
  std::vector<ScoredCandidate> kept;
  for (int i = 0; i < static_cast<int>(scored.size()); ++i) {
    if (scored[i].r >= threshold) kept.push_back({i, std::move(scored[i])});
  }
  return kept;
}

std::string SerializeSftRecord(const SftRecord& record) {
  return JsonObjectWriter()
      .String("bundle_id", record.bundle_id)
      .Integer("candidate_index", record.candidate_index)
      .Number("r", record.r)
      .String("passage", record.passage)
      .String("candidate", record.candidate)
      .String("config_id", record.config_id)
      .Finish();
}

absl::StatusOr<SftDataset> BuildSftDataset(
    const std::vector<TaskBundle>& bundles,
    const std::vector<CandidateSet>& sets, const Evaluator& evaluator,
    int n_use, double threshold, int threads) {
  if (n_use < 1) return absl::InvalidArgumentError("n_use must be >= 1");
  std::map<std::string, const TaskBundle*> by_id;
  for (const TaskBundle& bundle : bundles) by_id[bundle.bundle_id] = &bundle;

  SftDataset dataset;
  for (const CandidateSet& set : sets) {
    const auto it = by_id.find(set.bundle_id);
    if (it == by_id.end()) {
      return absl::NotFoundError(
          absl::StrCat("no bundle with id '", set.bundle_id, "'"));
    }
    if (static_cast<int>(set.candidates.size()) < n_use) {
      return absl::InvalidArgumentError(absl::StrCat(
          "bundle ", set.bundle_id, " has ", set.candidates.size(),
          " candidates, fewer than n_use=", n_use));
    }
    const TaskBundle& bundle = *it->second;
    const std::vector<RewardBreakdown> scored = ScoreCandidates(
        Prefix(set.candidates, n_use), bundle, evaluator, threads);
    int best = -1;
    for (int i = 0; i < static_cast<int>(scored.size()); ++i) {
      const bool survives = !scored[i].failure && scored[i].r >= threshold;
      if (survives && (best < 0 || scored[i].r > scored[best].r)) best = i;
    }
    if (best < 0) {
      ++dataset.skipped;
      continue;
    }
    dataset.records.push_back(SftRecord{set.bundle_id, bundle.passage,
                                        set.candidates[best], scored[best].r,
                                        best, scored[best].config_id});
    ++dataset.emitted;
  }
  return dataset;
}

AdvantageVector GroupAdvantages(const std::vector<double>& rewards,
                                double epsilon) {
  AdvantageVector out;
  out.rewards = rewards;
  out.epsilon = epsilon;
  out.advantages.assign(rewards.size(), 0.0);
  if (rewards.empty() ||
      std::all_of(rewards.begin(), rewards.end(),
                  [&](double r) { return r == rewards.front(); })) {
    return out;
  }
  const double n = static_cast<double>(rewards.size());
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= n;
  double squares = 0.0;
  for (double r : rewards) squares += (r - mean) * (r - mean);
  const double scale = std::max(std::sqrt(squares / n), epsilon);
  for (size_t i = 0; i < rewards.size(); ++i) {
    out.advantages[i] = (rewards[i] - mean) / scale;
  }
  return out;
}

}  // namespace stagescore
