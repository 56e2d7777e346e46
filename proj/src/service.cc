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

#include <algorithm>
#include <optional>
#include <utility>

#include "absl/strings/str_cat.h"
#include "httplib.h"
#include "json.hpp"
#include "stagescore/parallel.h"
#include "stagescore/records.h"
#include "stagescore/selection.h"
#include "stagescore/version.h"
#include "text.h"

namespace stagescore {
namespace {

using nlohmann::json;

constexpr char kJsonType[] = "application/json";

ServiceResponse Error(int status, std::string_view code,
                      std::string_view message) {
  const std::string inner = JsonObjectWriter()
                                .String("code", code)
                                .String("message", message)
                                .Finish();
  return {status, JsonObjectWriter().Raw("error", inner).Finish()};
}

std::string NumberArray(const std::vector<double>& values) {
  std::string out = "[";
  for (size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ",";
    out += FormatNumber(values[i]);
  }
  return out + "]";
}

}  // namespace

absl::StatusOr<std::unique_ptr<RewardService>> RewardService::Create(
    std::vector<TaskBundle> bundles, RewardConfig config,
    ServiceOptions options) {
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  if (options.max_candidates < 1 || options.max_body_bytes == 0) {
    return absl::InvalidArgumentError("service limits must be positive");
  }
  std::map<std::string, TaskBundle> by_id;
  for (TaskBundle& bundle : bundles) {
    if (absl::Status s = ValidateTaskBundle(bundle); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("bundle ", bundle.bundle_id, ": ", s.message()));
    }
    const std::string id = bundle.bundle_id;
    if (!by_id.emplace(id, std::move(bundle)).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate bundle_id: ", id));
    }
  }
  return std::unique_ptr<RewardService>(
      new RewardService(std::move(by_id), std::move(config), options));
}

RewardService::RewardService(std::map<std::string, TaskBundle> bundles,
                             RewardConfig config, ServiceOptions options)
    : bundles_(std::move(bundles)),
      evaluator_(std::move(config)),
      options_(options) {}

RewardService::~RewardService() { Stop(); }

ServiceResponse RewardService::Health() const {
  return {200, JsonObjectWriter()
                   .String("status", "ok")
                   .String("version", kEngineVersion)
                   .Integer("bundles", static_cast<long long>(bundles_.size()))
                   .Finish()};
}

ServiceResponse RewardService::Config() const {
  return {200, JsonObjectWriter()
                   .Raw("config", ConfigToJson(evaluator_.config()))
                   .String("config_id", evaluator_.config_id())
                   .String("version", kEngineVersion)
                   .Finish()};
}

ServiceResponse RewardService::Score(std::string_view body) const {
  if (body.size() > options_.max_body_bytes) {
    return Error(413, "request_too_large",
                 absl::StrCat("request body exceeds limit of ",
                              options_.max_body_bytes, " bytes"));
  }
  json request = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (request.is_discarded() || !request.is_object()) {
    return Error(400, "bad_request", "request body must be a JSON object");
  }

  std::string request_id;
  if (auto it = request.find("request_id"); it != request.end()) {
    if (!it->is_string()) {
      return Error(400, "bad_request", "request_id must be a string");
    }
    request_id = it->get<std::string>();
  }

  const bool has_id = request.contains("bundle_id");
  const bool has_inline = request.contains("bundle");
  if (has_id == has_inline) {
    return Error(400, "bad_request",
                 "exactly one of bundle_id or bundle is required");
  }
  std::optional<TaskBundle> inline_bundle;
  const TaskBundle* bundle = nullptr;
  if (has_id) {
    const json& id = request["bundle_id"];
    if (!id.is_string()) {
      return Error(400, "bad_request", "bundle_id must be a string");
    }
    const auto found = bundles_.find(id.get<std::string>());
    if (found == bundles_.end()) {
      return Error(404, "unknown_bundle",
                   absl::StrCat("unknown bundle_id: ", id.get<std::string>()));
    }
    bundle = &found->second;
  } else {
    auto parsed = ParseTaskBundle(request["bundle"].dump());
    if (!parsed.ok()) {
      return Error(400, "bad_request",
                   absl::StrCat("bundle: ", parsed.status().message()));
    }
    inline_bundle = std::move(*parsed);
    bundle = &*inline_bundle;
  }

  const auto cands = request.find("candidates");
  if (cands == request.end() || !cands->is_array() || cands->empty()) {
    return Error(400, "bad_request", "candidates must be a non-empty array");
  }
  if (cands->size() > static_cast<size_t>(options_.max_candidates)) {
    return Error(413, "too_many_candidates",
                 absl::StrCat("candidates exceed limit of ",
                              options_.max_candidates));
  }
  std::vector<std::string> candidates;
  candidates.reserve(cands->size());
  for (const json& c : *cands) {
    if (!c.is_string()) {
      return Error(400, "bad_request", "candidates must be strings");
    }
    candidates.push_back(c.get<std::string>());
  }

  bool with_advantages = false;
  if (auto it = request.find("with_advantages"); it != request.end()) {
    if (!it->is_boolean()) {
      return Error(400, "bad_request", "with_advantages must be a boolean");
    }
    with_advantages = it->get<bool>();
  }

  std::optional<Evaluator> custom;
  if (auto it = request.find("config"); it != request.end()) {
    if (!it->is_object()) {
      return Error(400, "bad_request", "config must be an object");
    }
    auto config = ApplyConfigOverrides(evaluator_.config(), it->dump());
    if (!config.ok()) {
      return Error(400, "bad_config", AsStd(config.status().message()));
    }
    custom.emplace(std::move(*config));
  }
  const Evaluator& evaluator = custom ? *custom : evaluator_;

  const std::vector<RewardBreakdown> breakdowns = ScoreCandidates(
      candidates, *bundle, evaluator, options_.threads_per_request);
  std::string list = "[";
  std::vector<double> rewards;
  for (size_t i = 0; i < breakdowns.size(); ++i) {
    if (i > 0) list += ",";
    list += BreakdownToJson(breakdowns[i]);
    rewards.push_back(Canonical(breakdowns[i].r));
  }
  list += "]";

  JsonObjectWriter out;
  out.String("request_id", request_id).Raw("breakdowns", list);
  if (with_advantages) {
    const AdvantageVector adv = GroupAdvantages(rewards);
    out.Raw("advantages", JsonObjectWriter()
                              .Raw("rewards", NumberArray(adv.rewards))
                              .Raw("advantages", NumberArray(adv.advantages))
                              .Raw("epsilon", json(adv.epsilon).dump())
                              .Finish());
  }
  out.String("config_id", evaluator.config_id())
      .String("version", kEngineVersion);
  return {200, out.Finish()};
}

absl::StatusOr<int> RewardService::Bind(const std::string& host, int port) {
  server_ = std::make_unique<httplib::Server>();
  const size_t workers =
      options_.http_threads > 0
          ? static_cast<size_t>(options_.http_threads)
          : std::max<size_t>(8, ResolveThreads(0));
  server_->new_task_queue = [workers] {
    return new httplib::ThreadPool(workers);
  };
  // Oversized bodies are refused while reading; the error handler below
  // fills in the message.
  server_->set_payload_max_length(options_.max_body_bytes);
  const auto send = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body, kJsonType);
  };
  server_->Get("/health", [this, send](const httplib::Request&,
                                       httplib::Response& res) {
    send(res, Health());
  });
  server_->Get("/config", [this, send](const httplib::Request&,
                                       httplib::Response& res) {
    send(res, Config());
  });
  server_->Post("/score", [this, send](const httplib::Request& req,
                                       httplib::Response& res) {
    send(res, Score(req.body));
  });
  server_->set_error_handler([this, send](const httplib::Request&,
                                          httplib::Response& res) {
    if (!res.body.empty()) return;
    if (res.status == 413) {
      send(res, Error(413, "request_too_large",
                      absl::StrCat("request body exceeds limit of ",
                                   options_.max_body_bytes, " bytes")));
    } else if (res.status == 404) {
      send(res, Error(404, "not_found", "no such endpoint"));
    } else {
      send(res, Error(res.status, "http_error",
                      absl::StrCat("HTTP status ", res.status)));
    }
  });

  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
  } else if (!server_->bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound <= 0) {
    server_.reset();
    return absl::UnavailableError(
        absl::StrCat("cannot bind ", host, ":", port));
  }
  return bound;
}

absl::Status RewardService::Listen() {
  if (!server_) return absl::FailedPreconditionError("Bind() first");
  if (!server_->listen_after_bind()) {
    return absl::InternalError("server stopped with an error");
  }
  return absl::OkStatus();
}

void RewardService::Stop() {
  if (server_) server_->stop();
}

}  // namespace stagescore
