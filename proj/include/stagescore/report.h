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

// Leaderboard-style summary of breakdown records grouped by system label.
// Gate failures count as zeros in every component mean; the validity rate is
// its own column.

#ifndef STAGESCORE_REPORT_H_
#define STAGESCORE_REPORT_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "stagescore/records.h"

namespace stagescore {

inline constexpr char kDefaultSystem[] = "default";

struct ReportRow {
  std::string system;
  int count = 0;
  // Percentages in [0, 100].
  double qa = 0.0;
  double ar = 0.0;
  double sv = 0.0;
  double cp = 0.0;
  double mc = 0.0;
  double st = 0.0;
  double avg = 0.0;  // mean of the six columns above
  double validity_rate = 0.0;
};

struct ReportTable {
  std::vector<ReportRow> rows;          // descending avg, then system name
  std::vector<std::string> config_ids;  // distinct, sorted
};

// Records without a system label fall under kDefaultSystem. Values are
// canonicalized before averaging so that reports built from records read back
// from disk match reports built in-process.
absl::StatusOr<ReportTable> BuildReport(
    const std::vector<BreakdownRecord>& records);

std::string RenderReportText(const ReportTable& table);
std::string RenderReportJson(const ReportTable& table);

}  // namespace stagescore

#endif  // STAGESCORE_REPORT_H_
