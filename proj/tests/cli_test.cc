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
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "stagescore/oracle.h"
#include "stagescore/records.h"
#include "stagescore/report.h"
#include "stagescore/synth.h"
#include "test_util.h"

namespace stagescore {
namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "stagescore");
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::TempDir(
        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    bundles_ = (dir_ / "bundles.jsonl").string();
    const CliResult run = Cli({"synth", "--kind", "bundles", "--seed", "5",
                         "--count", "4", "--out", bundles_});
    ASSERT_EQ(run.code, 0) << run.err;
  }

  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }

  std::filesystem::path dir_;
  std::string bundles_;
};

TEST_F(CliTest, ScoreExitCodes) {
  const TaskBundle bundle = GenBundle(5);
  WriteFile(Path("oracle.json"), GenGreedyOracle(bundle).raw);
  WriteFile(Path("bad.json"), "{\"Scene 1\": ");

  CliResult ok = Cli({"score", "--bundles", bundles_, "--bundle-id",
                bundle.bundle_id, "--candidate", Path("oracle.json")});
  EXPECT_EQ(ok.code, kExitOk) << ok.err;
  EXPECT_NE(ok.out.find("r: 1.000000"), std::string::npos) << ok.out;

  CliResult malformed = Cli({"score", "--bundles", bundles_, "--bundle-id",
                       bundle.bundle_id, "--candidate", Path("bad.json")});
  EXPECT_EQ(malformed.code, kExitOk);
  EXPECT_NE(malformed.out.find("malformed_syntax"), std::string::npos)
      << malformed.out;

  EXPECT_EQ(Cli({"score", "--bundles", bundles_, "--bundle-id", "nope",
                 "--candidate", Path("oracle.json")})
                .code,
            kExitInputError);
  EXPECT_EQ(Cli({"score", "--bundles", Path("missing.jsonl"), "--bundle-id",
                 bundle.bundle_id, "--candidate", Path("oracle.json")})
                .code,
            kExitInputError);
  EXPECT_EQ(Cli({"no-such-command"}).code, kExitInputError);
}

TEST_F(CliTest, BatchScoreThenReportMatchesInProcessReport) {
  const std::string candidates = Path("candidates.jsonl");
  const CliResult synth = Cli({"synth", "--kind", "random", "--seed", "3",
                         "--count", "5", "--bundles", bundles_, "--out",
                         candidates});
  ASSERT_EQ(synth.code, 0) << synth.err;

  const std::string breakdowns = Path("breakdowns.jsonl");
  const CliResult batch = Cli({"batch-score", "--bundles", bundles_, "--candidates",
                         candidates, "--threads", "3", "--out", breakdowns});
  ASSERT_EQ(batch.code, 0) << batch.err;

  const CliResult from_file = Cli({"report", "--breakdowns", breakdowns});
  const CliResult in_process = Cli({"report", "--bundles", bundles_, "--candidates",
                              candidates});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  ASSERT_EQ(in_process.code, 0) << in_process.err;
  EXPECT_EQ(from_file.out, in_process.out);
  EXPECT_NE(from_file.out.find("random"), std::string::npos);

  auto records = ReadBreakdownFile(breakdowns);
  ASSERT_TRUE(records.ok());
  EXPECT_EQ(records->size(), 20u);
  for (size_t i = 1; i < records->size(); ++i) {
    const auto& a = (*records)[i - 1];
    const auto& b = (*records)[i];
    EXPECT_TRUE(a.bundle_id != b.bundle_id ||
                a.candidate_index + 1 == b.candidate_index);
  }
}

TEST_F(CliTest, OutputIsDeterministicAcrossThreadCounts) {
  const std::string candidates = Path("candidates.jsonl");
  ASSERT_EQ(Cli({"synth", "--kind", "random", "--seed", "8", "--count", "6",
                 "--bundles", bundles_, "--out", candidates})
                .code,
            0);
  const CliResult one = Cli({"batch-score", "--bundles", bundles_, "--candidates",
                       candidates, "--threads", "1"});
  const CliResult four = Cli({"batch-score", "--bundles", bundles_, "--candidates",
                        candidates, "--threads", "4"});
  ASSERT_EQ(one.code, 0) << one.err;
  EXPECT_EQ(one.out, four.out);
  EXPECT_EQ(one.out, Cli({"batch-score", "--bundles", bundles_,
                          "--candidates", candidates})
                         .out);
}

TEST_F(CliTest, RankFilterAndAdvantages) {
  const std::string candidates = Path("candidates.jsonl");
  ASSERT_EQ(Cli({"synth", "--kind", "random", "--seed", "1", "--count", "4",
                 "--bundles", bundles_, "--out", candidates})
                .code,
            0);
  const CliResult rank = Cli({"rank", "--bundles", bundles_, "--candidates",
                        candidates, "--n", "2", "--format", "records"});
  ASSERT_EQ(rank.code, 0) << rank.err;
  EXPECT_EQ(std::count(rank.out.begin(), rank.out.end(), '\n'), 4);

  const CliResult filter = Cli({"filter", "--bundles", bundles_, "--candidates",
                          candidates, "--threshold", "0"});
  ASSERT_EQ(filter.code, 0) << filter.err;
  EXPECT_EQ(std::count(filter.out.begin(), filter.out.end(), '\n'), 16);

  WriteFile(Path("rewards.jsonl"), "{\"rewards\":[1,0]}\n");
  const CliResult adv = Cli({"advantages", "--rewards", Path("rewards.jsonl")});
  ASSERT_EQ(adv.code, 0) << adv.err;
  EXPECT_NE(adv.out.find("[1.000000,-1.000000]"), std::string::npos)
      << adv.out;
}

TEST_F(CliTest, InvalidConfigIsAnInputError) {
  WriteFile(Path("config.json"), "{\"k\": -1}");
  const CliResult run = Cli({"--config", Path("config.json"), "batch-score",
                       "--bundles", bundles_, "--candidates", bundles_});
  EXPECT_EQ(run.code, kExitInputError);
  EXPECT_FALSE(run.err.empty());
}

}  // namespace
}  // namespace stagescore
