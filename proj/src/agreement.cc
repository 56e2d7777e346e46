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
#include <numeric>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "stagescore/records.h"
#include "stagescore/version.h"
#include "text.h"

namespace stagescore {
namespace {

using Json = nlohmann::json;

int Sign(double v) { return (v > 0) - (v < 0); }

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double LogLikelihood(const std::vector<double>& xs, const std::vector<int>& ys,
                     double a, double b) {
  double total = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double z = a + b * xs[i];
    total += ys[i] * z - Softplus(z);
  }
  return total;
}

// Finds the intercept that zeroes the score equation for a fixed slope.
double FitIntercept(const std::vector<double>& xs, const std::vector<int>& ys,
                    double slope) {
  const auto residual = [&](double a) {
    double sum = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
      sum += ys[i] - Sigmoid(a + slope * xs[i]);
    }
    return sum;  // decreasing in a
  };
  double lo = -1.0, hi = 1.0;
  while (residual(lo) < 0 && lo > -1e6) lo *= 2;
  while (residual(hi) > 0 && hi < 1e6) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct Union {
  std::vector<int> parent;
  explicit Union(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int Find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void Join(int a, int b) { parent[Find(a)] = Find(b); }
};

std::string ErrorJson(const absl::Status& status) {
  return JsonObjectWriter().String("error", AsStd(status.message())).Finish();
}

}  // namespace

std::string_view HumanLabelName(HumanLabel label) {
  switch (label) {
    case HumanLabel::kABetter:
      return "A_better";
    case HumanLabel::kSame:
      return "same";
    case HumanLabel::kBBetter:
      return "B_better";
    case HumanLabel::kBothBad:
      return "both_bad";
  }
  return "unknown";
}

absl::StatusOr<HumanLabel> HumanLabelFromName(std::string_view name) {
  for (HumanLabel label : {HumanLabel::kABetter, HumanLabel::kSame,
                           HumanLabel::kBBetter, HumanLabel::kBothBad}) {
    if (HumanLabelName(label) == name) return label;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown human_label '", AsAbsl(name),
                   "' (expected A_better, same, B_better or both_bad)"));
}

std::string SerializePairwiseRecord(const PairwiseRecord& record) {
  return JsonObjectWriter()
      .String("item_id", record.item_id)
      .String("system_a", record.system_a)
      .String("system_b", record.system_b)
      .String("human_label", HumanLabelName(record.label))
      .Number("score_a", record.score_a)
      .Number("score_b", record.score_b)
      .Finish();
}

absl::StatusOr<PairwiseRecord> ParsePairwiseRecord(std::string_view line) {
  Json root;
  try {
    root = Json::parse(line.begin(), line.end());
  } catch (const Json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("not valid JSON: ", e.what()));
  }
  if (!root.is_object()) {
    return absl::InvalidArgumentError("record must be a JSON object");
  }
  PairwiseRecord record;
  for (auto [key, out] : {std::pair{"item_id", &record.item_id},
                          std::pair{"system_a", &record.system_a},
                          std::pair{"system_b", &record.system_b}}) {
    const auto it = root.find(key);
    if (it == root.end() || !it->is_string()) {
      return absl::InvalidArgumentError(
          absl::StrCat("missing string field '", key, "'"));
    }
    *out = it->get<std::string>();
  }
  if (record.system_a == record.system_b) {
    return absl::InvalidArgumentError("system_a and system_b must differ");
  }
  const auto label = root.find("human_label");
  if (label == root.end() || !label->is_string()) {
    return absl::InvalidArgumentError("missing string field 'human_label'");
  }
  auto parsed = HumanLabelFromName(label->get<std::string>());
  if (!parsed.ok()) return parsed.status();
  record.label = *parsed;
  for (auto [key, out] : {std::pair{"score_a", &record.score_a},
                          std::pair{"score_b", &record.score_b}}) {
    const auto it = root.find(key);
    if (it == root.end() || !it->is_number()) {
      return absl::InvalidArgumentError(
          absl::StrCat("missing numeric field '", key, "'"));
    }
    *out = it->get<double>();
    if (!(*out >= 0.0 && *out <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat(key, " must lie in [0, 1]"));
    }
  }
  return record;
}

absl::StatusOr<std::vector<PairwiseRecord>> ReadPairwiseFile(
    const std::string& path) {
  auto text = ReadFile(path);
  if (!text.ok()) return text.status();
  std::vector<PairwiseRecord> records;
  size_t start = 0;
  int line_number = 0;
  while (start < text->size()) {
    size_t end = text->find('\n', start);
    if (end == std::string::npos) end = text->size();
    ++line_number;
    const std::string_view line(text->data() + start, end - start);
    start = end + 1;
    if (TrimWhitespace(line).empty()) continue;
    auto record = ParsePairwiseRecord(line);
    if (!record.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          path, ":", line_number, ": ", record.status().message()));
    }
    records.push_back(*std::move(record));
  }
  return records;
}

absl::StatusOr<BradleyTerryFit> FitBradleyTerry(
    const std::vector<PairwiseRecord>& records,
    const BradleyTerryOptions& options) {
  std::map<std::string, int> index;
  for (const PairwiseRecord& r : records) {
    if (r.label == HumanLabel::kBothBad) continue;
    index.try_emplace(r.system_a, 0);
    index.try_emplace(r.system_b, 0);
  }
  std::vector<std::string> names;
  for (auto& [name, i] : index) {
    i = static_cast<int>(names.size());
    names.push_back(name);
  }
  const int n = static_cast<int>(names.size());
  if (n < 2) {
    return absl::InvalidArgumentError(
        "Bradley-Terry needs comparisons between at least two systems");
  }

  // wins[i][j]: (half-)wins of i over j.
  std::vector<std::vector<double>> wins(n, std::vector<double>(n, 0.0));
  Union components(n);
  int decisive = 0;
  for (const PairwiseRecord& r : records) {
    if (r.label == HumanLabel::kBothBad) continue;
    const int a = index[r.system_a];
    const int b = index[r.system_b];
    switch (r.label) {
      case HumanLabel::kABetter:
        wins[a][b] += 1.0;
        break;
      case HumanLabel::kBBetter:
        wins[b][a] += 1.0;
        break;
      default:
        wins[a][b] += 0.5;
        wins[b][a] += 0.5;
        break;
    }
    if (IsDecisive(r.label)) {
      ++decisive;
      components.Join(a, b);
    }
  }
  if (decisive == 0) {
    return absl::InvalidArgumentError(
        "Bradley-Terry needs at least one decisive comparison");
  }
  for (int i = 1; i < n; ++i) {
    if (components.Find(i) != components.Find(0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("decisive comparisons do not connect '", names[0],
                       "' and '", names[i], "'"));
    }
  }

  BradleyTerryFit fit;
  // A system that never wins (or never loses) has no finite MLE.
  for (int i = 0; i < n && !fit.smoothed; ++i) {
    double won = 0.0, lost = 0.0;
    for (int j = 0; j < n; ++j) {
      won += wins[i][j];
      lost += wins[j][i];
    }
    fit.smoothed = won == 0.0 || lost == 0.0;
  }
  if (fit.smoothed) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (wins[i][j] + wins[j][i] > 0.0) {
          wins[i][j] += 0.5;
          wins[j][i] += 0.5;
        }
      }
    }
  }

  std::vector<double> total_wins(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) total_wins[i] += wins[i][j];
  }
  std::vector<double> p(n, 1.0), next(n);
  for (fit.iterations = 1; fit.iterations <= options.max_iterations;
       ++fit.iterations) {
    for (int i = 0; i < n; ++i) {
      double denominator = 0.0;
      for (int j = 0; j < n; ++j) {
        const double games = wins[i][j] + wins[j][i];
        if (j != i && games > 0.0) denominator += games / (p[i] + p[j]);
      }
      next[i] = total_wins[i] / denominator;
    }
    double log_mean = 0.0;
    for (double v : next) log_mean += std::log(v);
    const double scale = std::exp(-log_mean / n);
    double change = 0.0;
    for (int i = 0; i < n; ++i) {
      next[i] *= scale;
      change = std::max(change, std::abs(next[i] - p[i]) / p[i]);
    }
    p.swap(next);
    if (change < options.tolerance) break;
  }
  fit.iterations = std::min(fit.iterations, options.max_iterations);
  for (int i = 0; i < n; ++i) {
    fit.ratings.push_back(
        SystemRating{names[i], p[i], 400.0 * std::log10(p[i]) + 1500.0});
  }
  return fit;
}

absl::StatusOr<double> PearsonR(const std::vector<double>& xs,
                                const std::vector<double>& ys) {
  if (xs.size() != ys.size()) {
    return absl::InvalidArgumentError("inputs differ in length");
  }
  if (xs.size() < 2) {
    return absl::InvalidArgumentError("need at least two observations");
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    return absl::InvalidArgumentError("correlation undefined: constant input");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> AverageRanks(const std::vector<double>& values) {
  std::vector<size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) {
      ++j;
    }
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

absl::StatusOr<double> SpearmanRho(const std::vector<double>& xs,
                                   const std::vector<double>& ys) {
  if (xs.size() != ys.size()) {
    return absl::InvalidArgumentError("inputs differ in length");
  }
  return PearsonR(AverageRanks(xs), AverageRanks(ys));
}

absl::StatusOr<double> RankAccuracy(
    const std::map<std::string, double>& system_scores,
    const std::map<std::string, double>& human_winrates) {
  if (system_scores.size() != human_winrates.size() ||
      !std::equal(system_scores.begin(), system_scores.end(),
                  human_winrates.begin(),
                  [](const auto& a, const auto& b) { return a.first == b.first; })) {
    return absl::InvalidArgumentError(
        "evaluator and human rankings cover different systems");
  }
  if (system_scores.size() < 2) {
    return absl::InvalidArgumentError("need at least two systems");
  }
  std::vector<double> s, h;
  for (const auto& [name, v] : system_scores) s.push_back(v);
  for (const auto& [name, v] : human_winrates) h.push_back(v);
  double credit = 0.0;
  int pairs = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    for (size_t j = i + 1; j < s.size(); ++j) {
      const int a = Sign(s[i] - s[j]);
      const int b = Sign(h[i] - h[j]);
      credit += (a == 0 || b == 0) ? 0.5 : (a == b ? 1.0 : 0.0);
      ++pairs;
    }
  }
  return credit / pairs;
}

std::map<std::string, double> HumanWinRates(
    const std::vector<PairwiseRecord>& records) {
  std::map<std::string, std::pair<double, int>> tally;
  for (const PairwiseRecord& r : records) {
    if (r.label == HumanLabel::kBothBad) continue;
    auto& a = tally[r.system_a];
    auto& b = tally[r.system_b];
    ++a.second;
    ++b.second;
    if (r.label == HumanLabel::kABetter) {
      a.first += 1.0;
    } else if (r.label == HumanLabel::kBBetter) {
      b.first += 1.0;
    } else {
      a.first += 0.5;
      b.first += 0.5;
    }
  }
  std::map<std::string, double> rates;
  for (const auto& [name, t] : tally) rates[name] = t.first / t.second;
  return rates;
}

std::map<std::string, double> SystemMeanScores(
    const std::vector<PairwiseRecord>& records) {
  std::map<std::string, std::pair<double, int>> tally;
  for (const PairwiseRecord& r : records) {
    tally[r.system_a].first += r.score_a;
    ++tally[r.system_a].second;
    tally[r.system_b].first += r.score_b;
    ++tally[r.system_b].second;
  }
  std::map<std::string, double> means;
  for (const auto& [name, t] : tally) means[name] = t.first / t.second;
  return means;
}

HumanLabel DeterministicPrediction(double score_a, double score_b) {
  const double delta = score_a - score_b;
  if (std::abs(delta) < kPredictionTieBand) return HumanLabel::kSame;
  return delta > 0 ? HumanLabel::kABetter : HumanLabel::kBBetter;
}

absl::StatusOr<double> CohensKappa(const std::vector<HumanLabel>& predicted,
                                   const std::vector<HumanLabel>& human) {
  if (predicted.size() != human.size()) {
    return absl::InvalidArgumentError("label lists differ in length");
  }
  if (predicted.empty()) return absl::InvalidArgumentError("no labels");
  const double n = static_cast<double>(predicted.size());
  std::map<HumanLabel, double> pred_marginal, human_marginal;
  double agree = 0.0;
  for (size_t i = 0; i < predicted.size(); ++i) {
    pred_marginal[predicted[i]] += 1.0 / n;
    human_marginal[human[i]] += 1.0 / n;
    agree += predicted[i] == human[i];
  }
  double expected = 0.0;
  for (const auto& [label, p] : pred_marginal) {
    const auto it = human_marginal.find(label);
    if (it != human_marginal.end()) expected += p * it->second;
  }
  if (std::abs(1.0 - expected) < 1e-15) {
    return absl::InvalidArgumentError(
        "kappa undefined: chance agreement is 1");
  }
  return (agree / n - expected) / (1.0 - expected);
}

absl::StatusOr<double> DecisiveKappa(
    const std::vector<PairwiseRecord>& records) {
  std::vector<HumanLabel> predicted, human;
  for (const PairwiseRecord& r : records) {
    const HumanLabel p = DeterministicPrediction(r.score_a, r.score_b);
    if (!IsDecisive(p) || !IsDecisive(r.label)) continue;
    predicted.push_back(p);
    human.push_back(r.label);
  }
  return CohensKappa(predicted, human);
}

absl::StatusOr<double> MannWhitneyAuc(const std::vector<double>& scores,
                                      const std::vector<int>& labels) {
  if (scores.size() != labels.size()) {
    return absl::InvalidArgumentError("inputs differ in length");
  }
  const std::vector<double> ranks = AverageRanks(scores);
  double positives = 0.0, rank_sum = 0.0;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i]) {
      positives += 1.0;
      rank_sum += ranks[i];
    }
  }
  const double negatives = static_cast<double>(labels.size()) - positives;
  if (positives == 0.0 || negatives == 0.0) {
    return absl::InvalidArgumentError("AUC needs both outcomes");
  }
  return (rank_sum - positives * (positives + 1.0) / 2.0) /
         (positives * negatives);
}

absl::StatusOr<CalibrationFit> FitLogistic(const std::vector<double>& xs,
                                           const std::vector<int>& ys,
                                           const CalibrationOptions& options) {
  if (xs.size() != ys.size()) {
    return absl::InvalidArgumentError("inputs differ in length");
  }
  if (xs.size() < 2) {
    return absl::InvalidArgumentError(
        "logistic fit needs at least two decisive records");
  }
  if (std::all_of(xs.begin(), xs.end(),
                  [&](double x) { return x == xs.front(); })) {
    return absl::InvalidArgumentError(
        "logistic fit undefined: score difference is constant");
  }
  auto auc = MannWhitneyAuc(xs, ys);
  if (!auc.ok()) return auc.status();

  CalibrationFit fit;
  fit.n = static_cast<int>(xs.size());
  fit.auc = *auc;

  double max_neg = -INFINITY, min_neg = INFINITY;
  double max_pos = -INFINITY, min_pos = INFINITY;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (ys[i]) {
      max_pos = std::max(max_pos, xs[i]);
      min_pos = std::min(min_pos, xs[i]);
    } else {
      max_neg = std::max(max_neg, xs[i]);
      min_neg = std::min(min_neg, xs[i]);
    }
  }
  if (max_neg <= min_pos || max_pos <= min_neg) {
    fit.separated = true;
    fit.slope = max_neg <= min_pos ? options.slope_cap : -options.slope_cap;
    fit.intercept = FitIntercept(xs, ys, fit.slope);
  } else {
    double a = 0.0, b = 0.0;
    double ll = LogLikelihood(xs, ys, a, b);
    for (fit.iterations = 0; fit.iterations < options.max_iterations;
         ++fit.iterations) {
      double g0 = 0.0, g1 = 0.0, h00 = 0.0, h01 = 0.0, h11 = 0.0;
      for (size_t i = 0; i < xs.size(); ++i) {
        const double p = Sigmoid(a + b * xs[i]);
        const double w = p * (1.0 - p);
        g0 += ys[i] - p;
        g1 += (ys[i] - p) * xs[i];
        h00 += w;
        h01 += w * xs[i];
        h11 += w * xs[i] * xs[i];
      }
      if (std::hypot(g0, g1) < options.gradient_tolerance) break;
      const double det = h00 * h11 - h01 * h01;
      if (!(det > 0.0)) break;
      double da = (h11 * g0 - h01 * g1) / det;
      double db = (h00 * g1 - h01 * g0) / det;
      // Step halving keeps the likelihood non-decreasing.
      double step = 1.0;
      double next_ll = LogLikelihood(xs, ys, a + da, b + db);
      while (next_ll < ll && step > 1e-12) {
        step *= 0.5;
        next_ll = LogLikelihood(xs, ys, a + step * da, b + step * db);
      }
      if (next_ll < ll) break;
      a += step * da;
      b += step * db;
      const bool stalled = next_ll == ll;
      ll = next_ll;
      if (stalled) break;
    }
    fit.intercept = a;
    fit.slope = std::clamp(b, -options.slope_cap, options.slope_cap);
    fit.separated = fit.slope != b;
  }

  double squares = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double p = Sigmoid(fit.intercept + fit.slope * xs[i]);
    squares += (p - ys[i]) * (p - ys[i]);
  }
  fit.brier = squares / static_cast<double>(xs.size());
  return fit;
}

absl::StatusOr<CalibrationFit> FitPreferenceLogistic(
    const std::vector<PairwiseRecord>& records,
    const CalibrationOptions& options) {
  std::vector<double> xs;
  std::vector<int> ys;
  for (const PairwiseRecord& r : records) {
    if (!IsDecisive(r.label)) continue;
    xs.push_back(r.score_a - r.score_b);
    ys.push_back(r.label == HumanLabel::kABetter);
  }
  return FitLogistic(xs, ys, options);
}

std::string AgreementReportJson(const std::vector<PairwiseRecord>& records) {
  int decisive = 0;
  for (const PairwiseRecord& r : records) decisive += IsDecisive(r.label);

  std::string bt;
  if (auto fit = FitBradleyTerry(records); fit.ok()) {
    std::string ratings = "[";
    for (const SystemRating& rating : fit->ratings) {
      if (ratings.size() > 1) ratings += ',';
      ratings += JsonObjectWriter()
                     .String("system", rating.system)
                     .Number("strength", rating.strength)
                     .Number("elo", rating.elo)
                     .Finish();
    }
    ratings += ']';
    bt = JsonObjectWriter()
             .Raw("ratings", ratings)
             .Integer("iterations", fit->iterations)
             .Bool("smoothed", fit->smoothed)
             .Finish();
  } else {
    bt = ErrorJson(fit.status());
  }

  const std::map<std::string, double> win_rates = HumanWinRates(records);
  std::map<std::string, double> mean_scores;
  for (const auto& [system, score] : SystemMeanScores(records)) {
    if (win_rates.contains(system)) mean_scores[system] = score;
  }
  std::string systems = "[";
  std::vector<double> xs, ys;
  for (const auto& [system, rate] : win_rates) {
    if (systems.size() > 1) systems += ',';
    systems += JsonObjectWriter()
                   .String("system", system)
                   .Number("mean_score", mean_scores[system])
                   .Number("human_win_rate", rate)
                   .Finish();
    xs.push_back(mean_scores[system]);
    ys.push_back(rate);
  }
  systems += ']';

  const auto value_or_error = [](const absl::StatusOr<double>& v) {
    return v.ok() ? FormatNumber(*v) : ErrorJson(v.status());
  };
  std::string calibration;
  if (auto fit = FitPreferenceLogistic(records); fit.ok()) {
    calibration = JsonObjectWriter()
                      .Number("intercept", fit->intercept)
                      .Number("slope", fit->slope)
                      .Number("auc", fit->auc)
                      .Number("brier", fit->brier)
                      .Integer("n", fit->n)
                      .Bool("separated", fit->separated)
                      .Finish();
  } else {
    calibration = ErrorJson(fit.status());
  }

  return JsonObjectWriter()
      .Integer("records", static_cast<long long>(records.size()))
      .Integer("decisive", decisive)
      .Raw("systems", systems)
      .Raw("bradley_terry", bt)
      .Raw("spearman_rho", value_or_error(SpearmanRho(xs, ys)))
      .Raw("pearson_r", value_or_error(PearsonR(xs, ys)))
      .Raw("rank_accuracy",
           value_or_error(RankAccuracy(mean_scores, win_rates)))
      .Raw("cohens_kappa", value_or_error(DecisiveKappa(records)))
      .Raw("calibration", calibration)
      .String("version", kEngineVersion)
      .Finish();
}

}  // namespace stagescore
