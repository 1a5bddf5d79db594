// Copyright 2026 The Anthill Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "backend/http.h"

#include "httplib.h"

#include "common/clock.h"
#include "common/error.h"
#include "common/logging.h"

namespace anthill {

namespace {

nlohmann::json parse_body(const httplib::Request& req) {
  try {
    return nlohmann::json::parse(req.body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kValidation, std::string("invalid JSON body: ") + e.what());
  }
}

void reply(httplib::Response& res, int code, const nlohmann::json& j) {
  res.status = code;
  res.set_content(j.dump(), "application/json");
}

}  // namespace

struct BackendService::Impl {
  httplib::Server server;
};

BackendService::BackendService(const BackendOptions& options)
    : options_(options),
      store_(std::make_unique<TaskStore>(options.event_log)),
      impl_(std::make_unique<Impl>()) {
  auto& svr = impl_->server;

  svr.Post("/tasks", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      auto body = parse_body(req);
      std::vector<Task> tasks;
      for (const auto& tj : body.at("tasks")) tasks.push_back(Task::from_json(tj));
      size_t n = store_->ingest(tasks);
      reply(res, 200, {{"ingested", n}});
    } catch (const Error& e) {
      reply(res, 409, {{"error", "duplicate_task_id"}, {"detail", e.what()}});
    } catch (const nlohmann::json::exception& e) {
      reply(res, 400, {{"error", "bad_request"}, {"detail", e.what()}});
    }
  });

  svr.Post("/tasks/claim", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      auto body = parse_body(req);
      std::optional<AnalysisKind> filter;
      if (body.contains("analysis") && !body["analysis"].is_null()) {
        filter = analysis_kind_from_name(body["analysis"].get<std::string>());
        if (!filter) {
          reply(res, 400, {{"error", "bad_request"}, {"detail", "unknown analysis"}});
          return;
        }
      }
      auto task = store_->claim(body.at("client_id").get<std::string>(),
                                body.at("worker_id").get<std::string>(), filter);
      reply(res, 200, {{"task", task ? task->to_json() : nlohmann::json(nullptr)}});
    } catch (const Error& e) {
      reply(res, 400, {{"error", "bad_request"}, {"detail", e.what()}});
    } catch (const nlohmann::json::exception& e) {
      reply(res, 400, {{"error", "bad_request"}, {"detail", e.what()}});
    }
  });

  svr.Post(R"(/tasks/([^/]+)/complete)",
           [this](const httplib::Request& req, httplib::Response& res) {
             try {
               auto body = parse_body(req);
               std::string status = body.at("status").get<std::string>();
               if (status != "done" && status != "failed") {
                 reply(res, 400, {{"error", "bad_request"},
                                  {"detail", "status must be done|failed"}});
                 return;
               }
               CompleteCode code = store_->complete(
                   req.matches[1].str(), body.at("worker_id").get<std::string>(),
                   status == "done", body.value("report_ref", ""));
               switch (code) {
                 case CompleteCode::kOk:
                   reply(res, 200, {{"ok", true}});
                   break;
                 case CompleteCode::kUnknownTask:
                   reply(res, 404, {{"error", complete_code_name(code)}});
                   break;
                 default:
                   reply(res, 409, {{"error", complete_code_name(code)}});
                   break;
               }
             } catch (const nlohmann::json::exception& e) {
               reply(res, 400, {{"error", "bad_request"}, {"detail", e.what()}});
             }
           });

  svr.Get("/tasks", [this](const httplib::Request& req, httplib::Response& res) {
    std::optional<TaskStatus> filter;
    if (req.has_param("status")) {
      std::string s = req.get_param_value("status");
      if (s == "open") filter = TaskStatus::kOpen;
      else if (s == "claimed") filter = TaskStatus::kClaimed;
      else if (s == "done") filter = TaskStatus::kDone;
      else if (s == "failed") filter = TaskStatus::kFailed;
      else {
        reply(res, 400, {{"error", "bad_request"}, {"detail", "unknown status"}});
        return;
      }
    }
    auto arr = nlohmann::json::array();
    for (const auto& t : store_->list(filter)) arr.push_back(t.to_json());
    reply(res, 200, {{"tasks", arr}, {"counts", store_->status_counts()}});
  });

  svr.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
    reply(res, 200, {{"ok", true}, {"tasks", store_->size()}});
  });
}

BackendService::~BackendService() { stop(); }

void BackendService::start() {
  auto& svr = impl_->server;
  if (options_.port == 0) {
    int p = svr.bind_to_any_port("127.0.0.1");
    if (p <= 0) throw Error(ErrorKind::kInfra, "backend bind failed");
    port_ = static_cast<uint16_t>(p);
  } else {
    if (!svr.bind_to_port("127.0.0.1", options_.port))
      throw Error(ErrorKind::kRetryable,
                  "backend bind failed on port " + std::to_string(options_.port));
    port_ = options_.port;
  }
  serve_thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  while (!impl_->server.is_running()) sleep_ms(1);
  log_info("backend", "serving", {{"port", port_}, {"log", options_.event_log.string()}});
}

void BackendService::stop() {
  if (serve_thread_.joinable()) {
    impl_->server.stop();
    serve_thread_.join();
  }
}

// --- client ------------------------------------------------------------------

namespace {
httplib::Client make_client(const std::string& base_url) {
  httplib::Client cli(base_url);
  cli.set_connection_timeout(2, 0);
  cli.set_read_timeout(10, 0);
  return cli;
}
}  // namespace

bool BackendClient::health() {
  auto cli = make_client(base_url_);
  auto res = cli.Get("/health");
  return res && res->status == 200;
}

size_t BackendClient::ingest(const std::vector<Task>& tasks) {
  auto cli = make_client(base_url_);
  nlohmann::json body;
  auto arr = nlohmann::json::array();
  for (const auto& t : tasks) arr.push_back(t.to_json());
  body["tasks"] = arr;
  auto res = cli.Post("/tasks", body.dump(), "application/json");
  if (!res) throw Error(ErrorKind::kRetryable, "backend unreachable");
  auto j = nlohmann::json::parse(res->body);
  if (res->status != 200)
    throw Error(ErrorKind::kValidation, j.value("detail", "ingest rejected"));
  return j.at("ingested").get<size_t>();
}

std::optional<Task> BackendClient::claim(const std::string& client_id,
                                         const std::string& worker_id,
                                         std::optional<AnalysisKind> filter) {
  auto cli = make_client(base_url_);
  nlohmann::json body{{"client_id", client_id}, {"worker_id", worker_id}};
  if (filter) body["analysis"] = analysis_kind_name(*filter);
  auto res = cli.Post("/tasks/claim", body.dump(), "application/json");
  if (!res || res->status != 200)
    throw Error(ErrorKind::kRetryable, "backend claim failed");
  auto j = nlohmann::json::parse(res->body);
  if (j.at("task").is_null()) return std::nullopt;
  return Task::from_json(j["task"]);
}

CompleteCode BackendClient::complete(const std::string& task_id,
                                     const std::string& worker_id, bool done,
                                     const std::string& report_ref) {
  auto cli = make_client(base_url_);
  nlohmann::json body{{"worker_id", worker_id},
                      {"status", done ? "done" : "failed"},
                      {"report_ref", report_ref}};
  auto res = cli.Post("/tasks/" + task_id + "/complete", body.dump(),
                      "application/json");
  if (!res) throw Error(ErrorKind::kRetryable, "backend unreachable");
  if (res->status == 200) return CompleteCode::kOk;
  auto j = nlohmann::json::parse(res->body, nullptr, false);
  std::string err = j.is_object() ? j.value("error", "") : "";
  if (err == "unknown_task") return CompleteCode::kUnknownTask;
  if (err == "not_claimed") return CompleteCode::kNotClaimed;
  if (err == "lease_mismatch") return CompleteCode::kLeaseMismatch;
  if (err == "lease_expired") return CompleteCode::kLeaseExpired;
  if (err == "already_completed") return CompleteCode::kAlreadyCompleted;
  throw Error(ErrorKind::kRetryable, "backend complete failed: " + res->body);
}

std::vector<Task> BackendClient::list(std::optional<TaskStatus> filter) {
  auto cli = make_client(base_url_);
  std::string path = "/tasks";
  if (filter) path += std::string("?status=") + task_status_name(*filter);
  auto res = cli.Get(path);
  if (!res || res->status != 200)
    throw Error(ErrorKind::kRetryable, "backend list failed");
  auto j = nlohmann::json::parse(res->body);
  std::vector<Task> out;
  for (const auto& tj : j.at("tasks")) out.push_back(Task::from_json(tj));
  return out;
}

}  // namespace anthill
