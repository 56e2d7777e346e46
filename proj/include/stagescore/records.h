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

// Line-delimited record formats and file loading.
//
// Every number written by this module uses the canonical fixed 6-decimal
// form, so records are byte-stable and a record read back carries exactly the
// values that were printed.

#ifndef STAGESCORE_RECORDS_H_
#define STAGESCORE_RECORDS_H_

#include <mutex>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "stagescore/reward.h"
#include "stagescore/task_bundle.h"

namespace stagescore {

// "%.6f", with negative zero printed as "0.000000".
std::string FormatNumber(double value);

// The value FormatNumber(value) denotes.
double Canonical(double value);

// Minimal ordered JSON object writer that emits canonical numbers.
class JsonObjectWriter {
 public:
  JsonObjectWriter& String(std::string_view key, std::string_view value);
  JsonObjectWriter& Number(std::string_view key, double value);
  JsonObjectWriter& Integer(std::string_view key, long long value);
  JsonObjectWriter& Bool(std::string_view key, bool value);
  // `json` must already be valid JSON text.
  JsonObjectWriter& Raw(std::string_view key, std::string_view json);
  std::string Finish() const { return body_ + "}"; }

 private:
  void Key(std::string_view key);
  std::string body_ = "{";
};

// JSON string literal for `text`, escaped.
std::string QuoteJson(std::string_view text);

// Breakdown record: one scored candidate.
struct BreakdownRecord {
  std::string bundle_id;
  int candidate_index = 0;
  std::string system;  // optional grouping label, empty when absent
  RewardBreakdown breakdown;
};

std::string BreakdownToJson(const RewardBreakdown& breakdown);
std::string SerializeBreakdownRecord(const BreakdownRecord& record);
absl::StatusOr<BreakdownRecord> ParseBreakdownRecord(std::string_view line);

// One line of a candidate-set file.
struct CandidateLine {
  std::string bundle_id;
  int candidate_index = 0;
  std::string raw_candidate;
  std::string system;
};

std::string SerializeCandidateLine(const CandidateLine& line);
absl::StatusOr<CandidateLine> ParseCandidateLine(std::string_view line);

// Reads a whole line-delimited file. Blank lines are skipped; errors name the
// path and 1-based line number.
absl::StatusOr<std::vector<CandidateLine>> ReadCandidateFile(
    const std::string& path);
absl::StatusOr<std::vector<BreakdownRecord>> ReadBreakdownFile(
    const std::string& path);

// Loads bundles from a single-object .json file, a .jsonl file with one bundle
// per line, or a directory of such files (sorted by file name). Bundle ids
// must be unique.
absl::StatusOr<std::vector<TaskBundle>> LoadBundles(const std::string& path);

absl::StatusOr<std::string> ReadFile(const std::string& path);

// Writes whole lines under a mutex so concurrent producers never interleave
// partial records.
class LineWriter {
 public:
  explicit LineWriter(std::ostream& out) : out_(out) {}
  void Write(std::string_view line);

 private:
  std::mutex mu_;
  std::ostream& out_;
};

}  // namespace stagescore

#endif  // STAGESCORE_RECORDS_H_
