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

#include "stagescore/task_bundle.h"

#include <unordered_set>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "json.hpp"
#include "text.h"

namespace stagescore {
namespace {

using Json = nlohmann::json;

absl::StatusOr<std::string> ReadId(const Json& value, std::string_view field) {
  if (value.is_string()) {
    std::string id(absl::StripAsciiWhitespace(value.get<std::string>()));
    if (id.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat(AsAbsl(field), " contains an empty id"));
    }
    return id;
  }
  if (value.is_number_unsigned()) return std::to_string(value.get<uint64_t>());
  return absl::InvalidArgumentError(
      absl::StrCat(AsAbsl(field), " ids must be strings or non-negative integers"));
}

absl::StatusOr<std::string> ReadName(const Json& value,
                                     std::string_view field) {
  if (!value.is_string()) {
    return absl::InvalidArgumentError(
        absl::StrCat(AsAbsl(field), " must contain strings"));
  }
  std::string name(absl::StripAsciiWhitespace(value.get<std::string>()));
  if (name.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat(AsAbsl(field), " contains an empty name"));
  }
  return name;
}

const Json* Field(const Json& root, const char* name, Json::value_t type) {
  const auto it = root.find(name);
  if (it == root.end() || it->type() != type) return nullptr;
  return &*it;
}

}  // namespace

std::vector<std::string> TaskBundle::ReferenceQuoteIds() const {
  std::vector<std::string> ids;
  for (const std::string& id : quote_ids) {
    if (reference_speakers.contains(id)) ids.push_back(id);
  }
  return ids;
}

absl::Status ValidateTaskBundle(const TaskBundle& bundle) {
  if (bundle.bundle_id.empty()) {
    return absl::InvalidArgumentError("bundle_id must be non-empty");
  }
  auto spans = FindQuoteSpans(bundle.passage);
  if (!spans.ok()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "bundle ", bundle.bundle_id, ": ", spans.status().message()));
  }
  std::vector<std::string> marked;
  for (const QuoteSpan& span : *spans) marked.push_back(span.id);
  if (marked != bundle.quote_ids) {
    return absl::InvalidArgumentError(absl::StrCat(
        "bundle ", bundle.bundle_id, ": passage marks [",
        absl::StrJoin(marked, ","), "] but quote_ids lists [",
        absl::StrJoin(bundle.quote_ids, ","), "]"));
  }
  std::unordered_set<std::string> ids(bundle.quote_ids.begin(),
                                      bundle.quote_ids.end());
  if (ids.size() != bundle.quote_ids.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("bundle ", bundle.bundle_id, ": repeated quote id"));
  }
  for (const auto& [alias, canonical] : bundle.alias_map) {
    if (!bundle.canonical_names.contains(canonical)) {
      return absl::InvalidArgumentError(
          absl::StrCat("bundle ", bundle.bundle_id, ": alias '", alias,
                       "' maps to unknown canonical name '", canonical, "'"));
    }
  }
  for (const auto& [quote_id, speaker] : bundle.reference_speakers) {
    if (!ids.contains(quote_id)) {
      return absl::InvalidArgumentError(
          absl::StrCat("bundle ", bundle.bundle_id, ": reference quote '",
                       quote_id, "' is not in quote_ids"));
    }
    if (!bundle.canonical_names.contains(speaker)) {
      return absl::InvalidArgumentError(
          absl::StrCat("bundle ", bundle.bundle_id, ": reference speaker '",
                       speaker, "' is not a canonical name"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<TaskBundle> ParseTaskBundle(std::string_view raw) {
  Json root;
  try {
    root = Json::parse(raw.begin(), raw.end());
  } catch (const Json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("bundle is not valid JSON: ", e.what()));
  }
  if (!root.is_object()) {
    return absl::InvalidArgumentError("bundle must be a JSON object");
  }
  const Json* bundle_id = Field(root, "bundle_id", Json::value_t::string);
  const Json* passage = Field(root, "passage", Json::value_t::string);
  const Json* quote_ids = Field(root, "quote_ids", Json::value_t::array);
  const Json* names = Field(root, "canonical_names", Json::value_t::array);
  if (!bundle_id || !passage || !quote_ids || !names) {
    return absl::InvalidArgumentError(
        "bundle needs string bundle_id and passage and array quote_ids and "
        "canonical_names");
  }
  TaskBundle bundle;
  bundle.bundle_id = std::string(
      absl::StripAsciiWhitespace(bundle_id->get_ref<const std::string&>()));
  bundle.passage = passage->get<std::string>();
  for (const Json& id : *quote_ids) {
    auto parsed = ReadId(id, "quote_ids");
    if (!parsed.ok()) return parsed.status();
    bundle.quote_ids.push_back(*std::move(parsed));
  }
  for (const Json& name : *names) {
    auto parsed = ReadName(name, "canonical_names");
    if (!parsed.ok()) return parsed.status();
    bundle.canonical_names.insert(*std::move(parsed));
  }
  if (const auto it = root.find("alias_map"); it != root.end()) {
    if (!it->is_object()) {
      return absl::InvalidArgumentError("alias_map must be an object");
    }
    for (const auto& [alias, canonical] : it->items()) {
      auto name = ReadName(canonical, "alias_map");
      if (!name.ok()) return name.status();
      bundle.alias_map[std::string(absl::StripAsciiWhitespace(alias))] = *name;
    }
  }
  if (const auto it = root.find("reference_speakers"); it != root.end()) {
    if (!it->is_object()) {
      return absl::InvalidArgumentError("reference_speakers must be an object");
    }
    for (const auto& [quote_id, speaker] : it->items()) {
      auto name = ReadName(speaker, "reference_speakers");
      if (!name.ok()) return name.status();
      bundle.reference_speakers[std::string(
          absl::StripAsciiWhitespace(quote_id))] = *name;
    }
  }
  if (absl::Status status = ValidateTaskBundle(bundle); !status.ok()) {
    return status;
  }
  return bundle;
}

std::string SerializeTaskBundle(const TaskBundle& bundle) {
  nlohmann::ordered_json root;
  root["bundle_id"] = bundle.bundle_id;
  root["passage"] = bundle.passage;
  root["quote_ids"] = bundle.quote_ids;
  root["canonical_names"] = bundle.canonical_names;
  root["alias_map"] = bundle.alias_map;
  root["reference_speakers"] = bundle.reference_speakers;
  return root.dump();
}

}  // namespace stagescore
