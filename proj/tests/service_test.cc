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


#include "stagescore/service.h"

#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "gtest/gtest.h"
#include "httplib.h"
#include "json.hpp"
#include "stagescore/records.h"
#include "stagescore/selection.h"
#include "stagescore/synth.h"

namespace stagescore {
namespace {

using Json = nlohmann::json;

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    for (uint64_t seed = 0; seed < 3; ++seed) bundles_.push_back(GenBundle(seed));
    ServiceOptions options;
    options.max_body_bytes = 64 << 10;
    options.max_candidates = 8;
    auto service = RewardService::Create(bundles_, RewardConfig{}, options);
    ASSERT_TRUE(service.ok()) << service.status();
    service_ = *std::move(service);
  }

  std::string Request(const TaskBundle& bundle, int n, bool advantages) {
    Json body = {{"request_id", "req-1"}, {"bundle_id", bundle.bundle_id}};
    Json candidates = Json::array();
    for (int i = 0; i < n; ++i) candidates.push_back(GenRandom(bundle, i, 0.6));
    candidates.push_back("{broken");
    body["candidates"] = candidates;
    if (advantages) body["with_advantages"] = true;
    return body.dump();
  }

  static std::string ErrorCode(const ServiceResponse& response) {
    return Json::parse(response.body)["error"]["code"].get<std::string>();
  }

  std::vector<TaskBundle> bundles_;
  std::unique_ptr<RewardService> service_;
};

TEST_F(ServiceTest, HealthAndConfig) {
  const ServiceResponse health = service_->Health();
  EXPECT_EQ(health.status, 200);
  EXPECT_EQ(Json::parse(health.body)["bundles"], 3);
  const Json config = Json::parse(service_->Config().body);
  EXPECT_EQ(config["config_id"], ConfigId(RewardConfig{}));
}

TEST_F(ServiceTest, ScoreMatchesInProcessScoring) {
  const TaskBundle& bundle = bundles_[1];
  const ServiceResponse response = service_->Score(Request(bundle, 4, false));
  ASSERT_EQ(response.status, 200) << response.body;
  const Json body = Json::parse(response.body);
  EXPECT_EQ(body["request_id"], "req-1");
  ASSERT_EQ(body["breakdowns"].size(), 5u);
  for (int i = 0; i < 4; ++i) {
    const RewardBreakdown local =
        ScoreCandidate(GenRandom(bundle, i, 0.6), bundle, {});
    EXPECT_EQ(body["breakdowns"][i].dump(),
              Json::parse(BreakdownToJson(local)).dump());
  }
  EXPECT_EQ(body["breakdowns"][4]["r"], 0.0);
  EXPECT_FALSE(body.contains("advantages"));
}

TEST_F(ServiceTest, AdvantagesMatchLocalComputation) {
  const TaskBundle& bundle = bundles_[0];
  const ServiceResponse response = service_->Score(Request(bundle, 3, true));
  ASSERT_EQ(response.status, 200) << response.body;
  const Json body = Json::parse(response.body);
  std::vector<double> rewards;
  for (const Json& b : body["breakdowns"]) rewards.push_back(b["r"]);
  const AdvantageVector expected = GroupAdvantages(rewards);
  ASSERT_EQ(body["advantages"]["advantages"].size(), rewards.size());
  for (size_t i = 0; i < rewards.size(); ++i) {
    EXPECT_NEAR(body["advantages"]["advantages"][i].get<double>(),
                expected.advantages[i], 1e-5);
  }
}

TEST_F(ServiceTest, InlineBundleAndOverrides) {
  const TaskBundle bundle = GenBundle(99);
  Json body = {{"bundle", Json::parse(SerializeTaskBundle(bundle))},
               {"candidates", {GenRandom(bundle, 1, 0.5)}},
               {"config", {{"enabled_components", {"grounding"}}}}};
  const ServiceResponse response = service_->Score(body.dump());
  ASSERT_EQ(response.status, 200) << response.body;
  RewardConfig config;
  config.enabled = {Component::kGrounding};
  EXPECT_EQ(Json::parse(response.body)["config_id"], ConfigId(config));
}

TEST_F(ServiceTest, Errors) {
  EXPECT_EQ(service_->Score("{nope").status, 400);
  EXPECT_EQ(service_->Score(R"({"candidates":["x"]})").status, 400);
  EXPECT_EQ(service_->Score(R"({"bundle_id":"synth-0"})").status, 400);
  EXPECT_EQ(service_->Score(R"({"bundle_id":"synth-0","candidates":[]})").status,
            400);
  const ServiceResponse missing =
      service_->Score(R"({"bundle_id":"ghost","candidates":["x"]})");
  EXPECT_EQ(missing.status, 404);
  EXPECT_FALSE(ErrorCode(missing).empty());
  EXPECT_EQ(service_->Score(Request(bundles_[0], 9, false)).status, 413);
  EXPECT_EQ(service_->Score(std::string(70 << 10, ' ')).status, 413);
  EXPECT_EQ(service_->Score(
                R"({"bundle_id":"synth-0","candidates":["x"],"config":{"k":0}})")
                .status,
            400);
}

TEST(ServiceCreateTest, RejectsDuplicateBundles) {
  EXPECT_FALSE(
      RewardService::Create({GenBundle(1), GenBundle(1)}, RewardConfig{}).ok());
  RewardConfig bad;
  bad.composition.k = 0;
  EXPECT_FALSE(RewardService::Create({GenBundle(1)}, bad).ok());
}

TEST_F(ServiceTest, ConcurrentClientsSeeIdenticalBodies) {
  auto port = service_->Bind("127.0.0.1", 0);
  ASSERT_TRUE(port.ok()) << port.status();
  std::thread server([&] { ASSERT_TRUE(service_->Listen().ok()); });
  const std::string request = Request(bundles_[2], 6, true);
  const std::string expected = service_->Score(request).body;

  std::vector<std::string> bodies(8);
  std::vector<int> statuses(8, 0);
  std::vector<std::thread> clients;
  for (int i = 0; i < 8; ++i) {
    clients.emplace_back([&, i] {
      httplib::Client client("127.0.0.1", *port);
      client.set_connection_timeout(5);
      for (int attempt = 0; attempt < 50; ++attempt) {
        auto result = client.Post("/score", request, "application/json");
        if (result) {
          statuses[i] = result->status;
          bodies[i] = result->body;
          return;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
      }
    });
  }
  for (std::thread& t : clients) t.join();
  httplib::Client client("127.0.0.1", *port);
  auto missing = client.Get("/nowhere");
  auto health = client.Get("/health");
  service_->Stop();
  server.join();

  for (int i = 0; i < 8; ++i) {
    EXPECT_EQ(statuses[i], 200);
    EXPECT_EQ(bodies[i], expected);
  }
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  ASSERT_TRUE(health);
  EXPECT_EQ(health->body, service_->Health().body);
}

}  // namespace
}  // namespace stagescore
