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

#include "cli.h"

#include <algorithm>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "stagescore/agreement.h"
#include "stagescore/chunking.h"
#include "stagescore/oracle.h"
#include "stagescore/parallel.h"
#include "stagescore/records.h"
#include "stagescore/report.h"
#include "stagescore/reward.h"
#include "stagescore/rng.h"
#include "stagescore/selection.h"
#include "stagescore/service.h"
#include "stagescore/synth.h"
#include "stagescore/version.h"

namespace stagescore {
namespace {

using nlohmann::json;

struct Options {
  std::string config_path;
  std::vector<std::string> disabled;
  std::string bundles;
  std::string bundle_id;
  std::string candidate;
  std::string candidates;
  std::string breakdowns;
  std::string pairs;
  std::string rewards;
  std::string input;
  std::string out;
  std::string format = "text";
  int n = 0;
  std::optional<double> threshold;
  uint64_t seed = 0;
  int threads = 0;
  double epsilon = kDefaultAdvantageEpsilon;
  // synth
  std::string kind = "bundles";
  int count = 1;
  double p_correct = 0.7;
  std::vector<std::string> perturb;
  int perturb_count = 1;
  int min_characters = BundleSpec{}.min_characters;
  int max_characters = BundleSpec{}.max_characters;
  int min_quotes = BundleSpec{}.min_quotes;
  int max_quotes = BundleSpec{}.max_quotes;
  // chunk
  int max_units = 4096;
  // serve
  std::string host = "127.0.0.1";
  int port = 8080;
  size_t max_body_bytes = ServiceOptions{}.max_body_bytes;
  int max_candidates = ServiceOptions{}.max_candidates;
};

// Everything a command needs besides its options.
struct Context {
  const Options& opt;
  std::ostream& out;
  std::ostream& err;
};

absl::Status WithPrefix(const std::string& prefix, const absl::Status& status) {
  return absl::Status(status.code(),
                      absl::StrCat(prefix, ": ", status.message()));
}

absl::StatusOr<RewardConfig> LoadConfig(const Options& opt) {
  RewardConfig config;
  if (!opt.config_path.empty()) {
    auto text = ReadFile(opt.config_path);
    if (!text.ok()) return text.status();
    auto parsed = ParseConfig(*text);
    if (!parsed.ok()) return WithPrefix(opt.config_path, parsed.status());
    config = std::move(*parsed);
  }
  for (const std::string& name : opt.disabled) {
    auto component = ComponentFromName(name);
    if (!component.ok()) return component.status();
    config.enabled.erase(*component);
  }
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  return config;
}

absl::Status Require(const std::string& value, const char* flag) {
  if (value.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(flag, " is required"));
  }
  return absl::OkStatus();
}

using BundleIndex = std::map<std::string, const TaskBundle*>;

BundleIndex IndexBundles(const std::vector<TaskBundle>& bundles) {
  BundleIndex index;
  for (const TaskBundle& b : bundles) index[b.bundle_id] = &b;
  return index;
}

absl::StatusOr<const TaskBundle*> Lookup(const BundleIndex& index,
                                         const std::string& id,
                                         const std::string& where) {
  const auto it = index.find(id);
  if (it == index.end()) {
    return absl::NotFoundError(
        absl::StrCat(where, ": unknown bundle_id ", id));
  }
  return it->second;
}

// Writes to --out when given, else to the context stream.
class Output {
 public:
  explicit Output(const Context& ctx) : ctx_(ctx) {}

  absl::Status Open() {
    if (ctx_.opt.out.empty()) return absl::OkStatus();
    file_ = std::make_unique<std::ofstream>(ctx_.opt.out, std::ios::binary);
    if (!*file_) {
      return absl::InvalidArgumentError(
          absl::StrCat("cannot write ", ctx_.opt.out));
    }
    return absl::OkStatus();
  }
  std::ostream& stream() { return file_ ? *file_ : ctx_.out; }
  absl::Status Close() {
    if (file_) {
      file_->close();
      if (!*file_) {
        return absl::InternalError(
            absl::StrCat("write failed: ", ctx_.opt.out));
      }
    }
    return absl::OkStatus();
  }

 private:
  const Context& ctx_;
  std::unique_ptr<std::ofstream> file_;
};

std::string NumberArray(const std::vector<double>& values) {
  std::string out = "[";
  for (size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ",";
    out += FormatNumber(values[i]);
  }
  return out + "]";
}

// Scores every candidate line in input order.
absl::StatusOr<std::vector<BreakdownRecord>> ScoreLines(
    const Context& ctx, const Evaluator& evaluator) {
  auto bundles = LoadBundles(ctx.opt.bundles);
  if (!bundles.ok()) return bundles.status();
  auto lines = ReadCandidateFile(ctx.opt.candidates);
  if (!lines.ok()) return lines.status();
  const BundleIndex index = IndexBundles(*bundles);
  std::vector<const TaskBundle*> targets;
  for (size_t i = 0; i < lines->size(); ++i) {
    auto bundle = Lookup(index, (*lines)[i].bundle_id,
                         absl::StrCat(ctx.opt.candidates, ": record ", i + 1));
    if (!bundle.ok()) return bundle.status();
    targets.push_back(*bundle);
  }
  std::vector<BreakdownRecord> records(lines->size());
  ParallelFor(lines->size(), ctx.opt.threads, [&](size_t i) {
    const CandidateLine& line = (*lines)[i];
    records[i] = {line.bundle_id, line.candidate_index, line.system,
                  evaluator.Score(line.raw_candidate, *targets[i])};
  });
  return records;
}

struct Sets {
  std::vector<TaskBundle> bundles;
  std::vector<CandidateSet> sets;
};

absl::StatusOr<Sets> LoadSets(const Context& ctx) {
  if (absl::Status s = Require(ctx.opt.bundles, "--bundles"); !s.ok()) {
    return s;
  }
  if (absl::Status s = Require(ctx.opt.candidates, "--candidates"); !s.ok()) {
    return s;
  }
  Sets result;
  auto bundles = LoadBundles(ctx.opt.bundles);
  if (!bundles.ok()) return bundles.status();
  result.bundles = std::move(*bundles);
  auto lines = ReadCandidateFile(ctx.opt.candidates);
  if (!lines.ok()) return lines.status();
  auto sets = GroupCandidates(*lines);
  if (!sets.ok()) return WithPrefix(ctx.opt.candidates, sets.status());
  result.sets = std::move(*sets);
  return result;
}

// ---- Commands ---------------------------------------------------------------

absl::Status CmdScore(const Context& ctx, const Evaluator& evaluator) {
  const Options& opt = ctx.opt;
  if (absl::Status s = Require(opt.bundles, "--bundles"); !s.ok()) return s;
  if (absl::Status s = Require(opt.candidate, "--candidate"); !s.ok()) {
    return s;
  }
  auto bundles = LoadBundles(opt.bundles);
  if (!bundles.ok()) return bundles.status();
  const TaskBundle* bundle = nullptr;
  if (!opt.bundle_id.empty()) {
    auto found = Lookup(IndexBundles(*bundles), opt.bundle_id, opt.bundles);
    if (!found.ok()) return found.status();
    bundle = *found;
  } else if (bundles->size() == 1) {
    bundle = &bundles->front();
  } else {
    return absl::InvalidArgumentError(absl::StrCat(
        opt.bundles, ": holds ", bundles->size(),
        " bundles; choose one with --bundle-id"));
  }
  auto raw = ReadFile(opt.candidate);
  if (!raw.ok()) return raw.status();
  const RewardBreakdown b = evaluator.Score(*raw, *bundle);

  Output output(ctx);
  if (absl::Status s = output.Open(); !s.ok()) return s;
  std::ostream& os = output.stream();
  if (opt.format == "records") {
    os << SerializeBreakdownRecord({bundle->bundle_id, 0, "", b}) << "\n";
  } else {
    os << "bundle_id: " << bundle->bundle_id << "\n"
       << "r: " << FormatNumber(b.r) << "\n"
       << "valid: " << (b.failure ? "false" : "true") << "\n";
    if (b.failure) {
      os << "failure_kind: " << ValidityKindName(b.failure->kind) << "\n"
         << "failure_detail: " << b.failure->detail << "\n";
    }
    const std::pair<const char*, double> rows[] = {
        {"quote_attribution", b.normalized.qa},
        {"alias_resolution", b.normalized.ar},
        {"stage_position", b.normalized.sv},
        {"character_positioning", b.normalized.cp},
        {"movement_coherence", b.normalized.mc},
        {"scene_transitions", b.normalized.st},
        {"macro_avg", b.macro_avg},
        {"s_move", b.s_move}};
    for (const auto& [name, value] : rows) {
      os << name << ": " << FormatNumber(value) << "\n";
    }
    os << "config_id: " << b.config_id << "\n"
       << "version: " << kEngineVersion << "\n";
  }
  return output.Close();
}

absl::Status CmdBatchScore(const Context& ctx, const Evaluator& evaluator) {
  if (absl::Status s = Require(ctx.opt.bundles, "--bundles"); !s.ok()) {
    return s;
  }
  if (absl::Status s = Require(ctx.opt.candidates, "--candidates"); !s.ok()) {
    return s;
  }
  auto records = ScoreLines(ctx, evaluator);
  if (!records.ok()) return records.status();
  Output output(ctx);
  if (absl::Status s = output.Open(); !s.ok()) return s;
  LineWriter writer(output.stream());
  for (const BreakdownRecord& record : *records) {
    writer.Write(SerializeBreakdownRecord(record));
  }
  return output.Close();
}

absl::Status CmdRank(const Context& ctx, const Evaluator& evaluator) {
  auto loaded = LoadSets(ctx);
  if (!loaded.ok()) return loaded.status();
  const BundleIndex index = IndexBundles(loaded->bundles);
  Output output(ctx);
  if (absl::Status s = output.Open(); !s.ok()) return s;
  std::ostream& os = output.stream();
  for (const CandidateSet& set : loaded->sets) {
    auto bundle = Lookup(index, set.bundle_id, ctx.opt.candidates);
    if (!bundle.ok()) return bundle.status();
    const int n = ctx.opt.n > 0
                      ? std::min<int>(ctx.opt.n, set.candidates.size())
                      : static_cast<int>(set.candidates.size());
    const ScoredCandidate best =
        BestOfN(set, **bundle, evaluator, n, ctx.opt.threads);
    if (ctx.opt.format == "records") {
      os << JsonObjectWriter()
                .String("bundle_id", set.bundle_id)
                .Integer("n", n)
                .Integer("candidate_index", best.index)
                .Number("r", best.breakdown.r)
                .Bool("valid", !best.breakdown.failure.has_value())
                .String("config_id", evaluator.config_id())
                .String("version", kEngineVersion)
                .Finish()
         << "\n";
    } else {
      os << set.bundle_id << "\tn=" << n << "\tindex=" << best.index
         << "\tr=" << FormatNumber(best.breakdown.r) << "\n";
    }
  }
  if (ctx.opt.format != "records") {
    os << "config_id: " << evaluator.config_id() << "\n"
       << "version: " << kEngineVersion << "\n";
  }
  return output.Close();
}

absl::Status CmdFilter(const Context& ctx, const Evaluator& evaluator) {
  auto loaded = LoadSets(ctx);
  if (!loaded.ok()) return loaded.status();
  const double threshold =
      ctx.opt.threshold.value_or(evaluator.config().reject_threshold);
  const BundleIndex index = IndexBundles(loaded->bundles);
  Output output(ctx);
  if (absl::Status s = output.Open(); !s.ok()) return s;
  for (const CandidateSet& set : loaded->sets) {
    auto bundle = Lookup(index, set.bundle_id, ctx.opt.candidates);
    if (!bundle.ok()) return bundle.status();
    for (const ScoredCandidate& kept : RejectionFilter(
             set, **bundle, evaluator, threshold, ctx.opt.threads)) {
      output.stream() << SerializeBreakdownRecord(
                             {set.bundle_id, kept.index, "", kept.breakdown})
                      << "\n";
    }
  }
  return output.Close();
}

absl::Status CmdBuildSft(const Context& ctx, const Evaluator& evaluator) {
  auto loaded = LoadSets(ctx);
  if (!loaded.ok()) return loaded.status();
  int n_use = ctx.opt.n;
  if (n_use == 0) {
    n_use = loaded->sets.empty() ? 1 : INT32_MAX;
    for (const CandidateSet& set : loaded->sets) {
      n_use = std::min<int>(n_use, set.candidates.size());
    }
  }
  const double threshold =
      ctx.opt.threshold.value_or(evaluator.config().reject_threshold);
  auto dataset = BuildSftDataset(loaded->bundles, loaded->sets, evaluator,
                                 n_use, threshold, ctx.opt.threads);
  if (!dataset.ok()) return dataset.status();
  Output output(ctx);
  if (absl::Status s = output.Open(); !s.ok()) return s;
  for (const SftRecord& record : dataset->records) {
    output.stream() << SerializeSftRecord(record) << "\n";
  }
  const std::string summary = JsonObjectWriter()
                                  .Integer("emitted", dataset->emitted)
                                  .Integer("skipped", dataset->skipped)
                                  .Integer("n_use", n_use)
                                  .Number("threshold", threshold)
                                  .String("config_id", evaluator.config_id())
                                  .String("version", kEngineVersion)
                                  .Finish();
  (ctx.opt.out.empty() ? ctx.err : ctx.out) << summary << "\n";
  return output.Close();
}

std::string AdvantageRecord(std::string_view key, std::string_view id,
                            const AdvantageVector& adv,
                            std::string_view config_id) {
  JsonObjectWriter writer;
  if (!key.empty()) writer.String(key, id);
  writer.Raw("rewards", NumberArray(adv.rewards))
      .Raw("advantages", NumberArray(adv.advantages))
      .Raw("epsilon", json(adv.epsilon).dump());
  if (!config_id.empty()) writer.String("config_id", config_id);
  return writer.String("version", kEngineVersion).Finish();
}

absl::Status CmdAdvantages(const Context& ctx, const Evaluator& evaluator) {
  const Options& opt = ctx.opt;
  if (!(opt.epsilon > 0.0)) {
    return absl::InvalidArgumentError("--epsilon must be > 0");
  }
  Output output(ctx);
  if (!opt.rewards.empty()) {
    auto text = ReadFile(opt.rewards);
    if (!text.ok()) return text.status();
    std::vector<std::string> records;
    size_t line_no = 0;
    size_t start = 0;
    while (start <= text->size()) {
      size_t end = text->find('\n', start);
      if (end == std::string::npos) end = text->size();
      const std::string line = text->substr(start, end - start);
      start = end + 1;
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const auto fail = [&](const char* msg) {
        return absl::InvalidArgumentError(
            absl::StrCat(opt.rewards, ":", line_no, ": ", msg));
      };
      json row = json::parse(line, nullptr, false);
      if (row.is_discarded() || !row.is_object()) {
        return fail("expected a JSON object");
      }
      const auto rewards = row.find("rewards");
      if (rewards == row.end() || !rewards->is_array() || rewards->empty()) {
        return fail("'rewards' must be a non-empty array");
      }
      std::vector<double> values;
      for (const json& v : *rewards) {
        if (!v.is_number()) return fail("rewards must be numbers");
        values.push_back(v.get<double>());
      }
      std::string id;
      if (auto g = row.find("group_id"); g != row.end()) {
        if (!g->is_string()) return fail("'group_id' must be a string");
        id = g->get<std::string>();
      }
      records.push_back(AdvantageRecord(id.empty() ? "" : "group_id", id,
                                        GroupAdvantages(values, opt.epsilon),
                                        ""));
    }
    if (absl::Status s = output.Open(); !s.ok()) return s;
    for (const std::string& r : records) output.stream() << r << "\n";
    return output.Close();
  }
  auto loaded = LoadSets(ctx);
  if (!loaded.ok()) return loaded.status();
  const BundleIndex index = IndexBundles(loaded->bundles);
  if (absl::Status s = output.Open(); !s.ok()) return s;
  for (const CandidateSet& set : loaded->sets) {
    auto bundle = Lookup(index, set.bundle_id, opt.candidates);
    if (!bundle.ok()) return bundle.status();
    std::vector<double> rewards;
    for (const RewardBreakdown& b :
         ScoreCandidates(set.candidates, **bundle, evaluator, opt.threads)) {
      rewards.push_back(Canonical(b.r));
    }
    output.stream() << AdvantageRecord("bundle_id", set.bundle_id,
                                       GroupAdvantages(rewards, opt.epsilon),
                                       evaluator.config_id())
                    << "\n";
  }
  return output.Close();
}

absl::Status CmdReport(const Context& ctx, const Evaluator& evaluator) {
  const Options& opt = ctx.opt;
  std::vector<BreakdownRecord> records;
  if (!opt.breakdowns.empty()) {
    auto read = ReadBreakdownFile(opt.breakdowns);
    if (!read.ok()) return read.status();
    records = std::move(*read);
  } else {
    if (opt.bundles.empty() || opt.candidates.empty()) {
      return absl::InvalidArgumentError(
          "--breakdowns or both --bundles and --candidates are required");
    }
    auto scored = ScoreLines(ctx, evaluator);
    if (!scored.ok()) return scored.status();
    records = std::move(*scored);
  }
  auto table = BuildReport(records);
  if (!table.ok()) return table.status();
  const std::string text = RenderReportText(*table);
  const std::string machine = RenderReportJson(*table);
  ctx.out << (opt.format == "records" ? machine + "\n" : text);
  if (!opt.out.empty()) {
    Output output(ctx);
    if (absl::Status s = output.Open(); !s.ok()) return s;
    output.stream() << machine << "\n";
    return output.Close();
  }
  return absl::OkStatus();
}

absl::Status CmdAgree(const Context& ctx) {
  if (absl::Status s = Require(ctx.opt.pairs, "--pairs"); !s.ok()) return s;
  auto records = ReadPairwiseFile(ctx.opt.pairs);
  if (!records.ok()) return records.status();
  if (records->empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat(ctx.opt.pairs, ": no pairwise records"));
  }
  Output output(ctx);
  if (absl::Status s = output.Open(); !s.ok()) return s;
  output.stream() << AgreementReportJson(*records) << "\n";
  return output.Close();
}

absl::Status CmdSynth(const Context& ctx, const Evaluator& evaluator) {
  const Options& opt = ctx.opt;
  if (opt.count < 1) return absl::InvalidArgumentError("--count must be >= 1");
  Output output(ctx);
  if (opt.kind == "bundles") {
    const BundleSpec spec{opt.min_characters, opt.max_characters,
                          opt.min_quotes, opt.max_quotes};
    if (spec.min_characters < 1 || spec.max_characters < spec.min_characters ||
        spec.min_quotes < 1 || spec.max_quotes < spec.min_quotes) {
      return absl::InvalidArgumentError("invalid bundle size ranges");
    }
    if (absl::Status s = output.Open(); !s.ok()) return s;
    for (int i = 0; i < opt.count; ++i) {
      output.stream() << SerializeTaskBundle(GenBundle(opt.seed + i, spec))
                      << "\n";
    }
    return output.Close();
  }

  if (absl::Status s = Require(opt.bundles, "--bundles"); !s.ok()) return s;
  auto bundles = LoadBundles(opt.bundles);
  if (!bundles.ok()) return bundles.status();
  std::vector<PerturbationKind> kinds;
  for (const std::string& name : opt.perturb) {
    auto kind = PerturbationFromName(name);
    if (!kind.ok()) return kind.status();
    kinds.push_back(*kind);
  }
  if (kinds.empty()) {
    kinds.assign(std::begin(kAllPerturbations), std::end(kAllPerturbations));
  }
  if (opt.kind == "random" && !(opt.p_correct >= 0.0 && opt.p_correct <= 1.0)) {
    return absl::InvalidArgumentError("--p-correct must lie in [0, 1]");
  }
  if (opt.kind != "random" && opt.kind != "perturbed" && opt.kind != "oracle") {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown --kind ", opt.kind));
  }

  if (absl::Status s = output.Open(); !s.ok()) return s;
  for (size_t b = 0; b < bundles->size(); ++b) {
    const TaskBundle& bundle = (*bundles)[b];
    const uint64_t bundle_seed = SeededRng::Derive(opt.seed, b);
    std::optional<OracleResult> oracle;
    if (opt.kind != "random") {
      oracle = GenGreedyOracle(bundle, evaluator.config());
      if (!oracle->exact) {
        ctx.err << "note: " << bundle.bundle_id
                << ": oracle fell back to a best-effort layout\n";
      }
    }
    for (int i = 0; i < opt.count; ++i) {
      const uint64_t seed = SeededRng::Derive(bundle_seed, i);
      CandidateLine line{bundle.bundle_id, i, "", opt.kind};
      if (opt.kind == "random") {
        line.raw_candidate = GenRandom(bundle, seed, opt.p_correct);
      } else if (opt.kind == "oracle") {
        line.raw_candidate = oracle->raw;
      } else {
        PerturbationResult result =
            GenPerturbed(oracle->play, bundle, kinds, opt.perturb_count, seed,
                         evaluator.config().composition.k);
        for (const std::string& notice : result.notices) {
          ctx.err << "note: " << bundle.bundle_id << "#" << i << ": "
                  << notice << "\n";
        }
        line.raw_candidate = std::move(result.raw);
      }
      output.stream() << SerializeCandidateLine(line) << "\n";
    }
  }
  return output.Close();
}

absl::Status CmdChunk(const Context& ctx) {
  if (absl::Status s = Require(ctx.opt.input, "--in"); !s.ok()) return s;
  auto text = ReadFile(ctx.opt.input);
  if (!text.ok()) return text.status();
  auto windows = ChunkPassage(*text, ctx.opt.max_units);
  if (!windows.ok()) return WithPrefix(ctx.opt.input, windows.status());
  Output output(ctx);
  if (absl::Status s = output.Open(); !s.ok()) return s;
  for (size_t i = 0; i < windows->size(); ++i) {
    output.stream() << JsonObjectWriter()
                           .Integer("index", static_cast<long long>(i))
                           .String("text", (*windows)[i])
                           .Finish()
                    << "\n";
  }
  return output.Close();
}

absl::Status CmdServe(const Context& ctx, const RewardConfig& config) {
  const Options& opt = ctx.opt;
  if (absl::Status s = Require(opt.bundles, "--bundles"); !s.ok()) return s;
  auto bundles = LoadBundles(opt.bundles);
  if (!bundles.ok()) return bundles.status();
  ServiceOptions options;
  options.max_body_bytes = opt.max_body_bytes;
  options.max_candidates = opt.max_candidates;
  options.threads_per_request = 1;
  options.http_threads = opt.threads;
  auto service = RewardService::Create(std::move(*bundles), config, options);
  if (!service.ok()) return service.status();
  auto port = (*service)->Bind(opt.host, opt.port);
  if (!port.ok()) return port.status();
  ctx.err << "serving " << (*service)->bundle_count() << " bundles on "
          << opt.host << ":" << *port << " config_id "
          << ConfigId(config) << " version " << kEngineVersion << std::endl;
  return (*service)->Listen();
}

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kAlreadyExists:
      return kExitInputError;
    default:
      return kExitInternalError;
  }
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  Options opt;
  CLI::App app{"Deterministic stage-play layout scoring", "stagescore"};
  app.set_version_flag("--version", std::string(kEngineVersion));
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", opt.config_path, "Reward config JSON")
      ->envname(kConfigEnv);
  app.add_option("--disable-component", opt.disabled,
                 "Drop a component from r (repeatable): grounding, "
                 "stage_validity, character_positioning, movement, "
                 "scene_transitions");
  app.add_option("--threads", opt.threads, "Worker threads, 0 = all cores");
  app.add_option("--out", opt.out, "Output file (default stdout)");
  app.add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"text", "records"}));

  const auto bundles_flag = [&](CLI::App* cmd) {
    cmd->add_option("--bundles", opt.bundles, "Bundle file or directory");
  };
  const auto candidates_flag = [&](CLI::App* cmd) {
    cmd->add_option("--candidates", opt.candidates, "Candidate records");
  };

  CLI::App* score = app.add_subcommand("score", "Score one candidate");
  bundles_flag(score);
  score->add_option("--bundle-id", opt.bundle_id, "Bundle to score against");
  score->add_option("--candidate", opt.candidate, "Raw candidate text file");

  CLI::App* batch = app.add_subcommand("batch-score", "Score candidate records");
  bundles_flag(batch);
  candidates_flag(batch);

  CLI::App* rank = app.add_subcommand("rank", "Best-of-N winner per bundle");
  bundles_flag(rank);
  candidates_flag(rank);
  rank->add_option("--n", opt.n, "Candidates considered, 0 = all")
      ->check(CLI::NonNegativeNumber);

  CLI::App* filter = app.add_subcommand("filter", "Keep candidates with r >= t");
  bundles_flag(filter);
  candidates_flag(filter);
  filter->add_option("--threshold", opt.threshold, "Reward threshold")
      ->check(CLI::Range(0.0, 1.0));

  CLI::App* sft = app.add_subcommand("build-sft", "Rejection-sampled dataset");
  bundles_flag(sft);
  candidates_flag(sft);
  sft->add_option("--n", opt.n, "Candidates used per bundle, 0 = all")
      ->check(CLI::NonNegativeNumber);
  sft->add_option("--threshold", opt.threshold, "Reward threshold")
      ->check(CLI::Range(0.0, 1.0));

  CLI::App* adv = app.add_subcommand("advantages", "Group-relative advantages");
  bundles_flag(adv);
  candidates_flag(adv);
  adv->add_option("--rewards", opt.rewards, "Reward groups, one per line");
  adv->add_option("--epsilon", opt.epsilon, "Denominator offset");

  CLI::App* report = app.add_subcommand("report", "Per-system score table");
  report->add_option("--breakdowns", opt.breakdowns, "Breakdown records");
  bundles_flag(report);
  candidates_flag(report);

  CLI::App* agree = app.add_subcommand("agree", "Human agreement statistics");
  agree->add_option("--pairs", opt.pairs, "Pairwise records");

  CLI::App* synth = app.add_subcommand("synth", "Synthetic bundles/candidates");
  synth->add_option("--kind", opt.kind, "bundles, random, perturbed, oracle")
      ->check(CLI::IsMember({"bundles", "random", "perturbed", "oracle"}));
  synth->add_option("--seed", opt.seed, "Seed");
  synth->add_option("--count", opt.count,
                    "Bundles, or candidates per bundle");
  bundles_flag(synth);
  synth->add_option("--p-correct", opt.p_correct, "Random: attribution rate");
  synth->add_option("--perturb", opt.perturb, "Perturbation kind (repeatable)");
  synth->add_option("--perturb-count", opt.perturb_count,
                    "Perturbations per candidate");
  synth->add_option("--min-characters", opt.min_characters);
  synth->add_option("--max-characters", opt.max_characters);
  synth->add_option("--min-quotes", opt.min_quotes);
  synth->add_option("--max-quotes", opt.max_quotes);

  CLI::App* chunk = app.add_subcommand("chunk", "Split a passage into windows");
  chunk->add_option("--in", opt.input, "Passage text file");
  chunk->add_option("--max-units", opt.max_units, "Units per window")
      ->check(CLI::PositiveNumber);

  CLI::App* serve = app.add_subcommand("serve", "Run the reward service");
  bundles_flag(serve);
  serve->add_option("--host", opt.host, "Bind address")
      ->envname("STAGESCORE_HOST");
  serve->add_option("--port", opt.port, "Port, 0 = any")
      ->envname("STAGESCORE_PORT");
  serve->add_option("--max-body-bytes", opt.max_body_bytes)
      ->envname("STAGESCORE_MAX_BODY_BYTES");
  serve->add_option("--max-candidates", opt.max_candidates)
      ->envname("STAGESCORE_MAX_CANDIDATES");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  absl::Status status;
  try {
    Context ctx{opt, out, err};
    auto config = LoadConfig(opt);
    if (!config.ok()) {
      status = config.status();
    } else if (agree->parsed()) {
      status = CmdAgree(ctx);
    } else if (chunk->parsed()) {
      status = CmdChunk(ctx);
    } else if (serve->parsed()) {
      status = CmdServe(ctx, *config);
    } else {
      const Evaluator evaluator(*config);
      if (score->parsed()) status = CmdScore(ctx, evaluator);
      if (batch->parsed()) status = CmdBatchScore(ctx, evaluator);
      if (rank->parsed()) status = CmdRank(ctx, evaluator);
      if (filter->parsed()) status = CmdFilter(ctx, evaluator);
      if (sft->parsed()) status = CmdBuildSft(ctx, evaluator);
      if (adv->parsed()) status = CmdAdvantages(ctx, evaluator);
      if (report->parsed()) status = CmdReport(ctx, evaluator);
      if (synth->parsed()) status = CmdSynth(ctx, evaluator);
    }
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
  if (!status.ok()) {
    err << "error: " << status.message() << "\n";
  }
  return ExitCodeFor(status);
}

}  // namespace stagescore
