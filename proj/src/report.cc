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

#include "stagescore/report.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "absl/status/status.h"
#include "stagescore/version.h"

namespace stagescore {
namespace {

struct Accumulator {
  int count = 0;
  int valid = 0;
  double sums[6] = {};
};

std::string PadRight(std::string text, size_t width) {
  if (text.size() < width) text.append(width - text.size(), ' ');
  return text;
}

std::string PadLeft(const std::string& text, size_t width) {
  return text.size() >= width ? text
                              : std::string(width - text.size(), ' ') + text;
}

}  // namespace

absl::StatusOr<ReportTable> BuildReport(
    const std::vector<BreakdownRecord>& records) {
  if (records.empty()) {
    return absl::InvalidArgumentError("report needs at least one record");
  }
  std::map<std::string, Accumulator> by_system;
  std::set<std::string> config_ids;
  for (const BreakdownRecord& record : records) {
    Accumulator& acc =
        by_system[record.system.empty() ? kDefaultSystem : record.system];
    const NormalizedScores& n = record.breakdown.normalized;
    const bool valid = !record.breakdown.failure.has_value();
    ++acc.count;
    acc.valid += valid;
    if (valid) {
      const double values[6] = {n.qa, n.ar, n.sv, n.cp, n.mc, n.st};
      for (int i = 0; i < 6; ++i) acc.sums[i] += Canonical(values[i]);
    }
    config_ids.insert(record.breakdown.config_id);
  }

  ReportTable table;
  table.config_ids.assign(config_ids.begin(), config_ids.end());
  for (const auto& [system, acc] : by_system) {
    ReportRow row;
    row.system = system;
    row.count = acc.count;
    double* columns[6] = {&row.qa, &row.ar, &row.sv, &row.cp, &row.mc, &row.st};
    double total = 0.0;
    for (int i = 0; i < 6; ++i) {
      *columns[i] = 100.0 * acc.sums[i] / acc.count;
      total += *columns[i];
    }
    row.avg = total / 6.0;
    row.validity_rate = 100.0 * acc.valid / acc.count;
    table.rows.push_back(std::move(row));
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [](const ReportRow& a, const ReportRow& b) {
              if (a.avg != b.avg) return a.avg > b.avg;
              return a.system < b.system;
            });
  return table;
}

std::string RenderReportText(const ReportTable& table) {
  static const char* kHeaders[] = {"Quote Attr.", "Alias Res.", "Stage Pos.",
                                   "Char. Pos.",  "Move. Coh.", "Scene Trans.",
                                   "AVG",         "Valid %",    "N"};
  size_t name_width = 6;
  for (const ReportRow& row : table.rows) {
    name_width = std::max(name_width, row.system.size());
  }
  constexpr size_t kColumn = 13;
  std::string out = PadRight("System", name_width);
  for (const char* header : kHeaders) out += PadLeft(header, kColumn);
  out += '\n';
  for (const ReportRow& row : table.rows) {
    out += PadRight(row.system, name_width);
    for (double v : {row.qa, row.ar, row.sv, row.cp, row.mc, row.st, row.avg,
                     row.validity_rate}) {
      out += PadLeft(FormatNumber(v), kColumn);
    }
    out += PadLeft(std::to_string(row.count), kColumn);
    out += '\n';
  }
  out += "config_id:";
  for (const std::string& id : table.config_ids) out += " " + id;
  out += "\nversion: ";
  out += kEngineVersion;
  out += '\n';
  return out;
}

std::string RenderReportJson(const ReportTable& table) {
  std::string rows = "[";
  for (const ReportRow& row : table.rows) {
    if (rows.size() > 1) rows += ',';
    rows += JsonObjectWriter()
                .String("system", row.system)
                .Integer("count", row.count)
                .Number("quote_attribution", row.qa)
                .Number("alias_resolution", row.ar)
                .Number("stage_position", row.sv)
                .Number("character_positioning", row.cp)
                .Number("movement_coherence", row.mc)
                .Number("scene_transitions", row.st)
                .Number("avg", row.avg)
                .Number("validity_rate", row.validity_rate)
                .Finish();
  }
  rows += ']';
  std::string ids = "[";
  for (const std::string& id : table.config_ids) {
    if (ids.size() > 1) ids += ',';
    ids += QuoteJson(id);
  }
  ids += ']';
  return JsonObjectWriter()
      .Raw("rows", rows)
      .Raw("config_ids", ids)
      .String("version", kEngineVersion)
      .Finish();
}

}  // namespace stagescore
