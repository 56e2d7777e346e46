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


#include "stagescore/chunking.h"

#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "stagescore/task_bundle.h"

namespace stagescore {
namespace {

int CountUnits(const std::string& text) {
  std::istringstream in(text);
  int n = 0;
  for (std::string word; in >> word;) ++n;
  return n;
}

std::string Join(const std::vector<std::string>& windows) {
  return std::accumulate(windows.begin(), windows.end(), std::string());
}

TEST(ChunkTest, EmptyAndBlank) {
  auto empty = ChunkPassage("", 10);
  ASSERT_TRUE(empty.ok());
  EXPECT_TRUE(empty->empty());
  auto blank = ChunkPassage("  \n ", 10);
  ASSERT_TRUE(blank.ok());
  ASSERT_EQ(blank->size(), 1u);
  EXPECT_EQ((*blank)[0], "  \n ");
  EXPECT_FALSE(ChunkPassage("a b", 0).ok());
}

TEST(ChunkTest, TenThousandUnitsMakeThreeWindows) {
  std::string text;
  for (int i = 0; i < 10000; ++i) text += "w" + std::to_string(i) + " ";
  auto windows = ChunkPassage(text, 4096);
  ASSERT_TRUE(windows.ok());
  ASSERT_EQ(windows->size(), 3u);
  EXPECT_EQ(CountUnits((*windows)[0]), 4096);
  EXPECT_EQ(CountUnits((*windows)[1]), 4096);
  EXPECT_EQ(CountUnits((*windows)[2]), 10000 - 2 * 4096);
  EXPECT_EQ(Join(*windows), text);
}

TEST(ChunkTest, BoundaryShiftsBeforeMarkedQuote) {
  // Units: a b |1| "x y z" ||1|| c -> the span covers units 3..7.
  const std::string text = "a b |1| \"x y z\" ||1|| c";
  auto windows = ChunkPassage(text, 4);
  ASSERT_TRUE(windows.ok());
  ASSERT_EQ(windows->size(), 3u);
  EXPECT_EQ((*windows)[0], "a b ");
  EXPECT_EQ((*windows)[1], "|1| \"x y z\" ||1|| ");
  EXPECT_EQ((*windows)[2], "c");
}

TEST(ChunkTest, UnbalancedMarkersRejected) {
  EXPECT_FALSE(ChunkPassage("a |1| \"b\" c", 5).ok());
}

TEST(ChunkTest, ConservationAndWholeSpans) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text = rng() % 2 ? "  " : "";
    int id = 0;
    const int pieces = 1 + static_cast<int>(rng() % 60);
    for (int i = 0; i < pieces; ++i) {
      if (rng() % 4 == 0) {
        const std::string tag = std::to_string(id++);
        text += "|" + tag + "| \"";
        const int words = 1 + static_cast<int>(rng() % 6);
        for (int w = 0; w < words; ++w) text += (w ? " q" : "q");
        text += "\" ||" + tag + "||";
      } else {
        text += "word";
      }
      text += rng() % 5 == 0 ? "\n\n" : " ";
    }
    const int limit = 1 + static_cast<int>(rng() % 12);
    auto windows = ChunkPassage(text, limit);
    ASSERT_TRUE(windows.ok()) << windows.status();
    EXPECT_EQ(Join(*windows), text);
    size_t spans = 0;
    for (const std::string& window : *windows) {
      auto found = FindQuoteSpans(window);
      ASSERT_TRUE(found.ok()) << window;
      spans += found->size();
    }
    EXPECT_EQ(spans, static_cast<size_t>(id));
  }
}

}  // namespace
}  // namespace stagescore
