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


#include "stagescore/agreement.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace stagescore {
namespace {

PairwiseRecord Pair(const std::string& a, const std::string& b,
                    HumanLabel label, double sa = 0.5, double sb = 0.5) {
  return PairwiseRecord{"item", a, b, label, sa, sb};
}

void AddWins(std::vector<PairwiseRecord>& records, const std::string& a,
             const std::string& b, int a_wins, int b_wins) {
  for (int i = 0; i < a_wins; ++i) {
    records.push_back(Pair(a, b, HumanLabel::kABetter));
  }
  for (int i = 0; i < b_wins; ++i) {
    records.push_back(Pair(a, b, HumanLabel::kBBetter));
  }
}

double Elo(const BradleyTerryFit& fit, const std::string& system) {
  for (const SystemRating& r : fit.ratings) {
    if (r.system == system) return r.elo;
  }
  return NAN;
}

TEST(BradleyTerryTest, ThreeToOneGap) {
  std::vector<PairwiseRecord> records;
  AddWins(records, "a", "b", 75, 25);
  auto fit = FitBradleyTerry(records);
  ASSERT_TRUE(fit.ok()) << fit.status();
  EXPECT_NEAR(Elo(*fit, "a") - Elo(*fit, "b"), 400 * std::log10(3.0), 1e-6);
  EXPECT_NEAR(Elo(*fit, "a") - Elo(*fit, "b"), 190.85, 0.5);
  EXPECT_FALSE(fit->smoothed);
}

TEST(BradleyTerryTest, SymmetricIsBaseline) {
  std::vector<PairwiseRecord> records;
  AddWins(records, "a", "b", 40, 40);
  records.push_back(Pair("a", "b", HumanLabel::kSame));
  auto fit = FitBradleyTerry(records);
  ASSERT_TRUE(fit.ok());
  EXPECT_NEAR(Elo(*fit, "a"), 1500.0, 1e-6);
  EXPECT_NEAR(Elo(*fit, "b"), 1500.0, 1e-6);
}

TEST(BradleyTerryTest, RecoversStrengthRatios) {
  // Counts equal their expectation under strengths (1, 2, 4).
  std::vector<PairwiseRecord> records;
  AddWins(records, "x", "y", 10, 20);
  AddWins(records, "x", "z", 6, 24);
  AddWins(records, "y", "z", 10, 20);
  auto fit = FitBradleyTerry(records);
  ASSERT_TRUE(fit.ok());
  ASSERT_EQ(fit->ratings.size(), 3u);
  EXPECT_NEAR(fit->ratings[0].strength, 0.5, 1e-6);
  EXPECT_NEAR(fit->ratings[1].strength, 1.0, 1e-6);
  EXPECT_NEAR(fit->ratings[2].strength, 2.0, 1e-6);
}

TEST(BradleyTerryTest, UndefeatedSystemIsSmoothed) {
  std::vector<PairwiseRecord> records;
  AddWins(records, "a", "b", 5, 0);
  auto fit = FitBradleyTerry(records);
  ASSERT_TRUE(fit.ok());
  EXPECT_TRUE(fit->smoothed);
  EXPECT_TRUE(std::isfinite(Elo(*fit, "a")));
  EXPECT_GT(Elo(*fit, "a"), Elo(*fit, "b"));
}

TEST(BradleyTerryTest, Errors) {
  std::vector<PairwiseRecord> disconnected;
  AddWins(disconnected, "a", "b", 3, 2);
  AddWins(disconnected, "c", "d", 3, 2);
  EXPECT_FALSE(FitBradleyTerry(disconnected).ok());
  EXPECT_FALSE(FitBradleyTerry({Pair("a", "b", HumanLabel::kSame)}).ok());
  EXPECT_FALSE(FitBradleyTerry({}).ok());
}

// Rank of each value: count of smaller values plus the mean tie position.
std::vector<double> BruteForceRanks(const std::vector<double>& v) {
  std::vector<double> ranks;
  for (double x : v) {
    int less = 0, equal = 0;
    for (double y : v) {
      less += y < x;
      equal += y == x;
    }
    ranks.push_back(less + (equal + 1) / 2.0);
  }
  return ranks;
}

double CovarianceCorrelation(const std::vector<double>& x,
                             const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  const double cov = sxy / n - (sx / n) * (sy / n);
  return cov / std::sqrt((sxx / n - sx * sx / n / n) *
                         (syy / n - sy * sy / n / n));
}

TEST(CorrelationTest, SpearmanExample) {
  auto rho = SpearmanRho({1, 3, 2, 4, 5}, {1, 2, 3, 4, 5});
  ASSERT_TRUE(rho.ok());
  EXPECT_NEAR(*rho, 0.9, 1e-12);
}

TEST(CorrelationTest, MatchOracles) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 3 + rng() % 30;
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng() % 7);  // plenty of ties
      y[i] = static_cast<double>(rng() % 1000) / 100.0;
    }
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; }))
      continue;
    EXPECT_EQ(AverageRanks(x), BruteForceRanks(x));
    auto pearson = PearsonR(x, y);
    ASSERT_TRUE(pearson.ok());
    EXPECT_NEAR(*pearson, CovarianceCorrelation(x, y), 1e-9);
    auto spearman = SpearmanRho(x, y);
    ASSERT_TRUE(spearman.ok());
    EXPECT_NEAR(*spearman,
                CovarianceCorrelation(BruteForceRanks(x), BruteForceRanks(y)),
                1e-9);
  }
}

TEST(CorrelationTest, ConstantInputIsAnError) {
  EXPECT_FALSE(PearsonR({1, 1, 1}, {1, 2, 3}).ok());
  EXPECT_FALSE(SpearmanRho({1, 2}, {1, 2, 3}).ok());
  EXPECT_FALSE(PearsonR({1}, {1}).ok());
}

TEST(RankAccuracyTest, OneAdjacentSwap) {
  const std::map<std::string, double> scores = {
      {"a", 1}, {"b", 2}, {"c", 3}, {"d", 4}, {"e", 5}, {"f", 6}};
  const std::map<std::string, double> humans = {
      {"a", .1}, {"b", .3}, {"c", .2}, {"d", .4}, {"e", .5}, {"f", .6}};
  auto accuracy = RankAccuracy(scores, humans);
  ASSERT_TRUE(accuracy.ok());
  EXPECT_NEAR(*accuracy, 14.0 / 15.0, 1e-12);
  EXPECT_FALSE(RankAccuracy(scores, {{"a", 1}}).ok());
}

TEST(WinRateTest, HalfCreditForSame) {
  std::vector<PairwiseRecord> records;
  AddWins(records, "a", "b", 3, 1);
  records.push_back(Pair("a", "b", HumanLabel::kSame));
  records.push_back(Pair("a", "b", HumanLabel::kBothBad));
  const auto rates = HumanWinRates(records);
  EXPECT_DOUBLE_EQ(rates.at("a"), 3.5 / 5);
  EXPECT_DOUBLE_EQ(rates.at("b"), 1.5 / 5);
}

TEST(KappaTest, HandComputedFixture) {
  // Confusion counts (pred, human): AA 8, AB 2, BA 3, BB 7.
  // p_o = 0.75, p_e = 0.5 * 0.55 + 0.5 * 0.45 = 0.5, kappa = 0.5.
  std::vector<HumanLabel> pred, human;
  const auto add = [&](HumanLabel p, HumanLabel h, int n) {
    for (int i = 0; i < n; ++i) {
      pred.push_back(p);
      human.push_back(h);
    }
  };
  const HumanLabel a = HumanLabel::kABetter, b = HumanLabel::kBBetter;
  add(a, a, 8);
  add(a, b, 2);
  add(b, a, 3);
  add(b, b, 7);
  auto kappa = CohensKappa(pred, human);
  ASSERT_TRUE(kappa.ok());
  EXPECT_NEAR(*kappa, 0.5, 1e-12);
}

TEST(KappaTest, ConstantPredictionIsZero) {
  std::vector<HumanLabel> pred(10, HumanLabel::kABetter);
  std::vector<HumanLabel> human(10, HumanLabel::kABetter);
  for (int i = 0; i < 4; ++i) human[i] = HumanLabel::kBBetter;
  auto kappa = CohensKappa(pred, human);
  ASSERT_TRUE(kappa.ok());
  EXPECT_NEAR(*kappa, 0.0, 1e-12);
  EXPECT_FALSE(CohensKappa(pred, pred).ok());
}

TEST(KappaTest, DecisiveOnly) {
  const std::vector<PairwiseRecord> records = {
      Pair("a", "b", HumanLabel::kABetter, 0.9, 0.1),
      Pair("a", "b", HumanLabel::kBBetter, 0.1, 0.9),
      Pair("a", "b", HumanLabel::kSame, 0.9, 0.1),
      Pair("a", "b", HumanLabel::kABetter, 0.5, 0.5)};
  auto kappa = DecisiveKappa(records);
  ASSERT_TRUE(kappa.ok());
  EXPECT_NEAR(*kappa, 1.0, 1e-12);
}

TEST(AucTest, SeparableAndIndependent) {
  auto separable = MannWhitneyAuc({0.1, 0.2, 0.3, 0.7, 0.9}, {0, 0, 0, 1, 1});
  ASSERT_TRUE(separable.ok());
  EXPECT_EQ(*separable, 1.0);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> scores;
  std::vector<int> labels;
  for (int i = 0; i < 10000; ++i) {
    scores.push_back(u(rng));
    labels.push_back(u(rng) < 0.5);
  }
  auto independent = MannWhitneyAuc(scores, labels);
  ASSERT_TRUE(independent.ok());
  EXPECT_NEAR(*independent, 0.5, 0.03);
  EXPECT_FALSE(MannWhitneyAuc({1, 2}, {1, 1}).ok());
}

double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

TEST(LogisticTest, RecoversSlopeAndBayesBrier) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<PairwiseRecord> records;
  for (int i = 0; i < 5000; ++i) {
    const double delta = u(rng);
    const double sa = 0.5 + delta / 2, sb = 0.5 - delta / 2;
    records.push_back(Pair("a", "b",
                           coin(rng) < Sigmoid(2 * delta)
                               ? HumanLabel::kABetter
                               : HumanLabel::kBBetter,
                           sa, sb));
  }
  auto fit = FitPreferenceLogistic(records);
  ASSERT_TRUE(fit.ok()) << fit.status();
  EXPECT_NEAR(fit->slope, 2.0, 0.2);
  EXPECT_NEAR(fit->intercept, 0.0, 0.15);
  EXPECT_FALSE(fit->separated);
  EXPECT_EQ(fit->n, 5000);

  // E[p(1 - p)] for p = sigmoid(2 x), x ~ U(-1, 1), by the midpoint rule.
  constexpr int kSteps = 100000;
  double bayes = 0.0;
  for (int i = 0; i < kSteps; ++i) {
    const double x = -1.0 + (i + 0.5) * 2.0 / kSteps;
    const double p = Sigmoid(2 * x);
    bayes += p * (1 - p) / kSteps;
  }
  EXPECT_NEAR(fit->brier, bayes, 0.01);

  // Population AUC: P(X+ > X-) with densities proportional to p and 1 - p.
  double auc = 0.0, negative_mass = 0.0, positive_total = 0.0;
  for (int i = 0; i < kSteps; ++i) {
    const double x = -1.0 + (i + 0.5) * 2.0 / kSteps;
    const double p = Sigmoid(2 * x);
    auc += p * (negative_mass + 0.5 * (1 - p));
    negative_mass += 1 - p;
    positive_total += p;
  }
  auc /= positive_total * negative_mass;
  EXPECT_NEAR(fit->auc, auc, 0.03);
}

TEST(LogisticTest, SeparationIsCapped) {
  auto fit = FitLogistic({-0.5, -0.2, 0.3, 0.6}, {0, 0, 1, 1});
  ASSERT_TRUE(fit.ok());
  EXPECT_TRUE(fit->separated);
  EXPECT_EQ(fit->slope, CalibrationOptions{}.slope_cap);
  EXPECT_EQ(fit->auc, 1.0);
  EXPECT_LT(fit->brier, 0.05);
}

TEST(LogisticTest, Errors) {
  EXPECT_FALSE(FitLogistic({0.2, 0.2, 0.2}, {0, 1, 0}).ok());
  EXPECT_FALSE(FitLogistic({0.1, 0.2}, {1, 1}).ok());
  EXPECT_FALSE(FitLogistic({0.1}, {1}).ok());
}

TEST(PairwiseRecordTest, RoundTripAndValidation) {
  const PairwiseRecord record =
      Pair("sys1", "sys2", HumanLabel::kBothBad, 0.25, 0.75);
  auto parsed = ParsePairwiseRecord(SerializePairwiseRecord(record));
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(parsed->label, HumanLabel::kBothBad);
  EXPECT_EQ(parsed->score_b, 0.75);
  EXPECT_FALSE(ParsePairwiseRecord(
                   R"({"item_id":"i","system_a":"a","system_b":"a",)"
                   R"("human_label":"same","score_a":0,"score_b":0})")
                   .ok());
  EXPECT_FALSE(ParsePairwiseRecord(
                   R"({"item_id":"i","system_a":"a","system_b":"b",)"
                   R"("human_label":"tie","score_a":0,"score_b":0})")
                   .ok());
  EXPECT_FALSE(ParsePairwiseRecord(
                   R"({"item_id":"i","system_a":"a","system_b":"b",)"
                   R"("human_label":"same","score_a":2,"score_b":0})")
                   .ok());
}

}  // namespace
}  // namespace stagescore
