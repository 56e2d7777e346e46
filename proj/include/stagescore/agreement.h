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

// Statistics for validating the evaluator against pairwise human judgments.

#ifndef STAGESCORE_AGREEMENT_H_
#define STAGESCORE_AGREEMENT_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace stagescore {

enum class HumanLabel { kABetter, kSame, kBBetter, kBothBad };

// "A_better", "same", "B_better", "both_bad".
std::string_view HumanLabelName(HumanLabel label);
absl::StatusOr<HumanLabel> HumanLabelFromName(std::string_view name);

inline bool IsDecisive(HumanLabel label) {
  return label == HumanLabel::kABetter || label == HumanLabel::kBBetter;
}

struct PairwiseRecord {
  std::string item_id;
  std::string system_a;
  std::string system_b;
  HumanLabel label = HumanLabel::kSame;
  double score_a = 0.0;
  double score_b = 0.0;
};

std::string SerializePairwiseRecord(const PairwiseRecord& record);
absl::StatusOr<PairwiseRecord> ParsePairwiseRecord(std::string_view line);
absl::StatusOr<std::vector<PairwiseRecord>> ReadPairwiseFile(
    const std::string& path);

// ---- Bradley-Terry --------------------------------------------------------

struct SystemRating {
  std::string system;
  double strength = 1.0;  // geometric mean over systems is 1
  double elo = 1500.0;    // 400 * log10(strength) + 1500
};

struct BradleyTerryOptions {
  int max_iterations = 10000;
  double tolerance = 1e-10;  // max relative change between iterations
};

struct BradleyTerryFit {
  std::vector<SystemRating> ratings;  // sorted by system name
  int iterations = 0;
  bool smoothed = false;  // pseudo-wins were added
};

// Minorize-maximize fit. "same" counts as half a win for each side;
// "both_bad" is dropped. Fails when the decisive comparisons do not connect
// every system, or when there are none.
absl::StatusOr<BradleyTerryFit> FitBradleyTerry(
    const std::vector<PairwiseRecord>& records,
    const BradleyTerryOptions& options = {});

// ---- Correlation and ranking ----------------------------------------------

absl::StatusOr<double> PearsonR(const std::vector<double>& xs,
                                const std::vector<double>& ys);

// Pearson correlation of average ranks.
absl::StatusOr<double> SpearmanRho(const std::vector<double>& xs,
                                   const std::vector<double>& ys);

// 1-based ranks with ties sharing their average rank.
std::vector<double> AverageRanks(const std::vector<double>& values);

// Fraction of unordered system pairs ordered the same way by both maps; a tie
// on either side scores one half.
absl::StatusOr<double> RankAccuracy(
    const std::map<std::string, double>& system_scores,
    const std::map<std::string, double>& human_winrates);

// (wins + ties / 2) / appearances per system, "both_bad" excluded.
std::map<std::string, double> HumanWinRates(
    const std::vector<PairwiseRecord>& records);

// Mean deterministic score of each system over its appearances.
std::map<std::string, double> SystemMeanScores(
    const std::vector<PairwiseRecord>& records);

// ---- Agreement on labels ---------------------------------------------------

inline constexpr double kPredictionTieBand = 1e-9;

// sign(score_a - score_b); differences inside the tie band give kSame.
HumanLabel DeterministicPrediction(double score_a, double score_b);

// Cohen's kappa with marginal-product chance agreement.
absl::StatusOr<double> CohensKappa(const std::vector<HumanLabel>& predicted,
                                   const std::vector<HumanLabel>& human);

// Kappa over records where both the prediction and the human label are
// decisive.
absl::StatusOr<double> DecisiveKappa(
    const std::vector<PairwiseRecord>& records);

// ---- Logistic calibration --------------------------------------------------

struct CalibrationOptions {
  double slope_cap = 50.0;  // |slope| bound under separation
  int max_iterations = 200;
  double gradient_tolerance = 1e-10;
};

struct CalibrationFit {
  double intercept = 0.0;
  double slope = 0.0;
  double auc = 0.5;
  double brier = 0.25;
  int n = 0;
  int iterations = 0;
  bool separated = false;
};

// Logistic regression of 1{A_better} on score_a - score_b over decisive
// records. AUC is the Mann-Whitney statistic of the score differences.
absl::StatusOr<CalibrationFit> FitPreferenceLogistic(
    const std::vector<PairwiseRecord>& records,
    const CalibrationOptions& options = {});

// Same fit on raw (difference, outcome) pairs.
absl::StatusOr<CalibrationFit> FitLogistic(const std::vector<double>& xs,
                                           const std::vector<int>& ys,
                                           const CalibrationOptions& options =
                                               {});

// Mann-Whitney AUC of `scores` for positives vs negatives, ties counted half.
absl::StatusOr<double> MannWhitneyAuc(const std::vector<double>& scores,
                                      const std::vector<int>& labels);

// ---- Report ---------------------------------------------------------------

// All statistics over one pairwise file. Statistics that cannot be computed
// on the input are reported with their error instead of a value.
std::string AgreementReportJson(const std::vector<PairwiseRecord>& records);

}  // namespace stagescore

#endif  // STAGESCORE_AGREEMENT_H_
