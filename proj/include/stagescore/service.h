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

// Batch reward endpoint over HTTP.
//
//   GET  /health  -> {"status":"ok","version":...,"bundles":N}
//   GET  /config  -> {"config":{...},"config_id":...,"version":...}
//   POST /score   -> ScoreResponse
//
// ScoreRequest body:
//   {"request_id": "...",            optional, echoed back
//    "bundle_id": "..." | "bundle": {...},   exactly one
//    "candidates": ["...", ...],     non-empty
//    "with_advantages": bool,        optional
//    "config": {...}}                optional overrides for this request
//
// ScoreResponse body:
//   {"request_id", "breakdowns": [...], "advantages"?: {"rewards",
//    "advantages", "epsilon"}, "config_id", "version"}
//
// Errors are {"error": {"code": ..., "message": ...}} with status 400 (bad
// request), 404 (unknown bundle_id) or 413 (request over a limit). Invalid
// candidates are not errors; they score 0.

#ifndef STAGESCORE_SERVICE_H_
#define STAGESCORE_SERVICE_H_

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "stagescore/reward.h"
#include "stagescore/task_bundle.h"

namespace httplib {
class Server;
}  // namespace httplib

namespace stagescore {

struct ServiceOptions {
  size_t max_body_bytes = 8u << 20;
  int max_candidates = 256;
  // Scoring threads per request; 1 keeps each request on its handler thread.
  int threads_per_request = 1;
  // HTTP worker threads; 0 picks max(8, hardware concurrency).
  int http_threads = 0;
};

struct ServiceResponse {
  int status = 200;
  std::string body;
};

class RewardService {
 public:
  // Fails on duplicate bundle ids, invalid bundles or an invalid config.
  static absl::StatusOr<std::unique_ptr<RewardService>> Create(
      std::vector<TaskBundle> bundles, RewardConfig config,
      ServiceOptions options = {});

  ~RewardService();
  RewardService(const RewardService&) = delete;
  RewardService& operator=(const RewardService&) = delete;

  // Request handlers, usable without a socket.
  ServiceResponse Health() const;
  ServiceResponse Config() const;
  ServiceResponse Score(std::string_view body) const;

  // Binds `host:port` (port 0 picks a free one) and returns the bound port.
  absl::StatusOr<int> Bind(const std::string& host, int port);
  // Serves until Stop(). Requires a successful Bind().
  absl::Status Listen();
  void Stop();

  const ServiceOptions& options() const { return options_; }
  size_t bundle_count() const { return bundles_.size(); }

 private:
  RewardService(std::map<std::string, TaskBundle> bundles,
                RewardConfig config, ServiceOptions options);

  std::map<std::string, TaskBundle> bundles_;
  Evaluator evaluator_;
  ServiceOptions options_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace stagescore

#endif  // STAGESCORE_SERVICE_H_
