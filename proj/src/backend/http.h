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
//
// REST surface of the task backend (JSON bodies, field names pinned by
// golden tests in tests/golden/):
//
//   POST /tasks                {"tasks": [...]}            -> {"ingested": n}
//   POST /tasks/claim          {"client_id","worker_id"[,"analysis"]}
//                                                          -> {"task": {...}|null}
//   POST /tasks/<id>/complete  {"worker_id","status","report_ref"}
//                                                          -> {"ok": true}
//   GET  /tasks?status=...                                 -> {"tasks": [...], "counts": {...}}
//   GET  /health                                           -> {"ok": true, ...}

#ifndef ANTHILL_BACKEND_HTTP_H_
#define ANTHILL_BACKEND_HTTP_H_

#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "backend/store.h"

namespace anthill {

struct BackendOptions {
  uint16_t port = 0;  // 0 = ephemeral
  std::filesystem::path event_log;
};

// In-process backend service, used by the CLI (blocking) and by tests and
// the campaign driver (start/stop).
class BackendService {
 public:
  explicit BackendService(const BackendOptions& options);
  ~BackendService();

  void start();  // returns once the port is bound and serving
  void stop();
  uint16_t port() const { return port_; }
  std::string base_url() const {
    return "http://127.0.0.1:" + std::to_string(port_);
  }
  TaskStore& store() { return *store_; }

 private:
  struct Impl;
  BackendOptions options_;
  std::unique_ptr<TaskStore> store_;
  std::unique_ptr<Impl> impl_;
  std::thread serve_thread_;
  uint16_t port_ = 0;
};

// HTTP client for troop, the task-ingest CLI and the campaign driver.
class BackendClient {
 public:
  explicit BackendClient(std::string base_url) : base_url_(std::move(base_url)) {}

  bool health();
  size_t ingest(const std::vector<Task>& tasks);  // throws on rejection
  std::optional<Task> claim(const std::string& client_id,
                            const std::string& worker_id,
                            std::optional<AnalysisKind> filter);
  CompleteCode complete(const std::string& task_id, const std::string& worker_id,
                        bool done, const std::string& report_ref);
  std::vector<Task> list(std::optional<TaskStatus> filter);

 private:
  std::string base_url_;
};

}  // namespace anthill

#endif  // ANTHILL_BACKEND_HTTP_H_
