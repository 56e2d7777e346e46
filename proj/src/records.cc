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

#include "stagescore/records.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "stagescore/version.h"
#include "text.h"

namespace stagescore {
namespace {

using OrderedJson = nlohmann::ordered_json;

absl::StatusOr<OrderedJson> ParseObject(std::string_view line) {
  OrderedJson root;
  try {
    root = OrderedJson::parse(line.begin(), line.end());
  } catch (const OrderedJson::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("not valid JSON: ", e.what()));
  }
  if (!root.is_object()) {
    return absl::InvalidArgumentError("record must be a JSON object");
  }
  return root;
}

absl::StatusOr<std::string> GetString(const OrderedJson& root,
                                      const char* key) {
  const auto it = root.find(key);
  if (it == root.end() || !it->is_string()) {
    return absl::InvalidArgumentError(
        absl::StrCat("missing string field '", key, "'"));
  }
  return it->get<std::string>();
}

absl::StatusOr<double> GetNumber(const OrderedJson& root, const char* key) {
  const auto it = root.find(key);
  if (it == root.end() || !it->is_number()) {
    return absl::InvalidArgumentError(
        absl::StrCat("missing numeric field '", key, "'"));
  }
  return it->get<double>();
}

absl::StatusOr<int> GetIndex(const OrderedJson& root) {
  const auto it = root.find("candidate_index");
  if (it == root.end() || !it->is_number_unsigned() ||
      it->get<unsigned long long>() > 1u << 30) {
    return absl::InvalidArgumentError(
        "candidate_index must be a non-negative integer");
  }
  return it->get<int>();
}

std::string OptionalString(const OrderedJson& root, const char* key) {
  const auto it = root.find(key);
  return it != root.end() && it->is_string() ? it->get<std::string>() : "";
}

std::string ComponentsJson(double qa, double ar, double sv, double cp,
                           double mc, double st) {
  return JsonObjectWriter()
      .Number("qa", qa)
      .Number("ar", ar)
      .Number("sv", sv)
      .Number("cp", cp)
      .Number("mc", mc)
      .Number("st", st)
      .Finish();
}

absl::Status ReadComponents(const OrderedJson& root, const char* key,
                            double* qa, double* ar, double* sv, double* cp,
                            double* mc, double* st) {
  const auto it = root.find(key);
  if (it == root.end() || !it->is_object()) {
    return absl::InvalidArgumentError(
        absl::StrCat("missing object field '", key, "'"));
  }
  const std::pair<const char*, double*> fields[] = {
      {"qa", qa}, {"ar", ar}, {"sv", sv}, {"cp", cp}, {"mc", mc}, {"st", st}};
  for (const auto& [name, out] : fields) {
    auto value = GetNumber(*it, name);
    if (!value.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(key, ": ", value.status().message()));
    }
    *out = *value;
  }
  return absl::OkStatus();
}

std::optional<ValidityKind> ValidityKindFromName(std::string_view name) {
  for (ValidityKind kind :
       {ValidityKind::kMalformedSyntax, ValidityKind::kSchemaViolation,
        ValidityKind::kUnknownPositionLabel, ValidityKind::kDuplicateQuoteId,
        ValidityKind::kEmptyPlay}) {
    if (ValidityKindName(kind) == name) return kind;
  }
  return std::nullopt;
}

template <typename T, typename ParseFn>
absl::StatusOr<std::vector<T>> ReadLines(const std::string& path,
                                         ParseFn parse) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open ", path));
  }
  std::vector<T> out;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (TrimWhitespace(line).empty()) continue;
    auto parsed = parse(line);
    if (!parsed.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          path, ":", line_number, ": ", parsed.status().message()));
    }
    out.push_back(*std::move(parsed));
  }
  return out;
}

absl::Status AppendBundlesFromFile(const std::filesystem::path& file,
                                   std::vector<TaskBundle>& out) {
  const std::string path = file.string();
  if (file.extension() == ".jsonl") {
    auto bundles = ReadLines<TaskBundle>(
        path, [](std::string_view line) { return ParseTaskBundle(line); });
    if (!bundles.ok()) return bundles.status();
    out.insert(out.end(), bundles->begin(), bundles->end());
    return absl::OkStatus();
  }
  auto text = ReadFile(path);
  if (!text.ok()) return text.status();
  auto bundle = ParseTaskBundle(*text);
  if (!bundle.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": ", bundle.status().message()));
  }
  out.push_back(*std::move(bundle));
  return absl::OkStatus();
}

}  // namespace

std::string FormatNumber(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  std::string out(buffer);
  if (out == "-0.000000") out = "0.000000";
  return out;
}

double Canonical(double value) {
  return std::strtod(FormatNumber(value).c_str(), nullptr);
}

std::string QuoteJson(std::string_view text) {
  return nlohmann::json(std::string(text))
      .dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

void JsonObjectWriter::Key(std::string_view key) {
  if (body_.size() > 1) body_ += ',';
  body_ += QuoteJson(key);
  body_ += ':';
}

JsonObjectWriter& JsonObjectWriter::String(std::string_view key,
                                           std::string_view value) {
  Key(key);
  body_ += QuoteJson(value);
  return *this;
}

JsonObjectWriter& JsonObjectWriter::Number(std::string_view key,
                                           double value) {
  Key(key);
  body_ += FormatNumber(value);
  return *this;
}

JsonObjectWriter& JsonObjectWriter::Integer(std::string_view key,
                                            long long value) {
  Key(key);
  body_ += std::to_string(value);
  return *this;
}

JsonObjectWriter& JsonObjectWriter::Bool(std::string_view key, bool value) {
  Key(key);
  body_ += value ? "true" : "false";
  return *this;
}

JsonObjectWriter& JsonObjectWriter::Raw(std::string_view key,
                                        std::string_view json) {
  Key(key);
  body_ += json;
  return *this;
}

std::string BreakdownToJson(const RewardBreakdown& b) {
  JsonObjectWriter writer;
  writer.Number("r", b.r).Bool("valid", !b.failure.has_value());
  if (b.failure) {
    writer.String("failure_kind", ValidityKindName(b.failure->kind))
        .String("failure_detail", b.failure->detail);
  }
  writer
      .Raw("normalized",
           ComponentsJson(b.normalized.qa, b.normalized.ar, b.normalized.sv,
                          b.normalized.cp, b.normalized.mc, b.normalized.st))
      .Raw("raw", ComponentsJson(b.raw.qa, b.raw.ar, b.raw.sv, b.raw.cp,
                                 b.raw.mc, b.raw.st))
      .Number("macro_avg", b.macro_avg)
      .Number("s_move", b.s_move);
  JsonObjectWriter subchecks;
  for (const auto& [name, value] : b.subchecks) subchecks.Number(name, value);
  writer.Raw("subchecks", subchecks.Finish()).String("config_id", b.config_id)
      .String("version", kEngineVersion);
  return writer.Finish();
}

std::string SerializeBreakdownRecord(const BreakdownRecord& record) {
  JsonObjectWriter writer;
  writer.String("bundle_id", record.bundle_id)
      .Integer("candidate_index", record.candidate_index);
  if (!record.system.empty()) writer.String("system", record.system);
  // Splice the breakdown's fields into the record object.
  const std::string breakdown = BreakdownToJson(record.breakdown);
  std::string out = writer.Finish();
  out.pop_back();
  out += ',';
  out.append(breakdown, 1, std::string::npos);
  return out;
}

absl::StatusOr<BreakdownRecord> ParseBreakdownRecord(std::string_view line) {
  auto root = ParseObject(line);
  if (!root.ok()) return root.status();
  BreakdownRecord record;
  RewardBreakdown& b = record.breakdown;

  auto bundle_id = GetString(*root, "bundle_id");
  if (!bundle_id.ok()) return bundle_id.status();
  record.bundle_id = *bundle_id;
  auto index = GetIndex(*root);
  if (!index.ok()) return index.status();
  record.candidate_index = *index;
  record.system = OptionalString(*root, "system");

  auto r = GetNumber(*root, "r");
  if (!r.ok()) return r.status();
  b.r = *r;
  const auto valid = root->find("valid");
  if (valid == root->end() || !valid->is_boolean()) {
    return absl::InvalidArgumentError("missing boolean field 'valid'");
  }
  if (!valid->get<bool>()) {
    auto kind_name = GetString(*root, "failure_kind");
    if (!kind_name.ok()) return kind_name.status();
    const auto kind = ValidityKindFromName(*kind_name);
    if (!kind) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown failure_kind '", *kind_name, "'"));
    }
    b.failure = ValidityFailure{*kind, OptionalString(*root, "failure_detail")};
  }
  b.raw.json_valid = valid->get<bool>();
  if (absl::Status s =
          ReadComponents(*root, "normalized", &b.normalized.qa,
                         &b.normalized.ar, &b.normalized.sv, &b.normalized.cp,
                         &b.normalized.mc, &b.normalized.st);
      !s.ok()) {
    return s;
  }
  if (absl::Status s = ReadComponents(*root, "raw", &b.raw.qa, &b.raw.ar,
                                      &b.raw.sv, &b.raw.cp, &b.raw.mc,
                                      &b.raw.st);
      !s.ok()) {
    return s;
  }
  auto macro = GetNumber(*root, "macro_avg");
  if (!macro.ok()) return macro.status();
  b.macro_avg = *macro;
  auto s_move = GetNumber(*root, "s_move");
  if (!s_move.ok()) return s_move.status();
  b.s_move = *s_move;
  if (const auto it = root->find("subchecks");
      it != root->end() && it->is_object()) {
    for (const auto& [name, value] : it->items()) {
      if (!value.is_number()) {
        return absl::InvalidArgumentError(
            absl::StrCat("subcheck '", name, "' must be a number"));
      }
      b.subchecks.emplace_back(name, value.get<double>());
    }
  }
  auto config_id = GetString(*root, "config_id");
  if (!config_id.ok()) return config_id.status();
  b.config_id = *config_id;
  return record;
}

std::string SerializeCandidateLine(const CandidateLine& line) {
  JsonObjectWriter writer;
  writer.String("bundle_id", line.bundle_id)
      .Integer("candidate_index", line.candidate_index);
  if (!line.system.empty()) writer.String("system", line.system);
  return writer.String("raw_candidate", line.raw_candidate).Finish();
}

absl::StatusOr<CandidateLine> ParseCandidateLine(std::string_view text) {
  auto root = ParseObject(text);
  if (!root.ok()) return root.status();
  CandidateLine line;
  auto bundle_id = GetString(*root, "bundle_id");
  if (!bundle_id.ok()) return bundle_id.status();
  line.bundle_id = *bundle_id;
  auto index = GetIndex(*root);
  if (!index.ok()) return index.status();
  line.candidate_index = *index;
  auto raw = GetString(*root, "raw_candidate");
  if (!raw.ok()) return raw.status();
  line.raw_candidate = *raw;
  line.system = OptionalString(*root, "system");
  return line;
}

absl::StatusOr<std::vector<CandidateLine>> ReadCandidateFile(
    const std::string& path) {
  return ReadLines<CandidateLine>(path, ParseCandidateLine);
}

absl::StatusOr<std::vector<BreakdownRecord>> ReadBreakdownFile(
    const std::string& path) {
  return ReadLines<BreakdownRecord>(path, ParseBreakdownRecord);
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::StatusOr<std::vector<TaskBundle>> LoadBundles(const std::string& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  std::vector<TaskBundle> bundles;
  if (fs::is_directory(path, ec)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path, ec)) {
      const auto ext = entry.path().extension();
      if (entry.is_regular_file() && (ext == ".json" || ext == ".jsonl")) {
        files.push_back(entry.path());
      }
    }
    if (ec) {
      return absl::InvalidArgumentError(
          absl::StrCat("cannot list ", path, ": ", ec.message()));
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
      if (absl::Status s = AppendBundlesFromFile(file, bundles); !s.ok()) {
        return s;
      }
    }
  } else {
    if (absl::Status s = AppendBundlesFromFile(path, bundles); !s.ok()) {
      return s;
    }
  }
  std::set<std::string> ids;
  for (const TaskBundle& bundle : bundles) {
    if (!ids.insert(bundle.bundle_id).second) {
      return absl::InvalidArgumentError(absl::StrCat(
          path, ": bundle id '", bundle.bundle_id, "' appears twice"));
    }
  }
  return bundles;
}

void LineWriter::Write(std::string_view line) {
  std::lock_guard<std::mutex> lock(mu_);
  out_ << line << '\n';
  out_.flush();
}

}  // namespace stagescore
