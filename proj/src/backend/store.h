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
// Task store behind the backend's REST surface. Tasks are leased, never
// handed out twice concurrently: a claim atomically transitions one Open
// task to Claimed under a fresh lease; an expired lease makes the task
// claimable again. All mutations serialize through one lock and append to a
// JSON-lines event log that is replayed on startup and auditable offline.

#ifndef ANTHILL_BACKEND_STORE_H_
#define ANTHILL_BACKEND_STORE_H_

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "common/fs.h"

namespace anthill {

enum class AnalysisKind { kVulnHunt, kPermMap, kReplay };
const char* analysis_kind_name(AnalysisKind k);
std::optional<AnalysisKind> analysis_kind_from_name(const std::string& s);

enum class TaskStatus { kOpen, kClaimed, kDone, kFailed };
const char* task_status_name(TaskStatus s);

struct Lease {
  std::string client_id;
  std::string worker_id;
  double granted_at_s = 0;
  double ttl_s = 0;

  double expiry_s() const { return granted_at_s + ttl_s; }
  bool expired(double now_s) const { return now_s >= expiry_s(); }
};

struct ApiRef {
  std::string service;
  uint32_t txn_id = 0;
  bool operator==(const ApiRef&) const = default;
};

struct Task {
  std::string task_id;
  std::vector<ApiRef> api_refs;  // non-empty
  AnalysisKind analysis = AnalysisKind::kVulnHunt;
  double budget_s = 60.0;
  TaskStatus status = TaskStatus::kOpen;
  std::optional<Lease> lease;
  std::string report_ref;

  nlohmann::json to_json() const;
  static Task from_json(const nlohmann::json& j);  // throws Error(kValidation)
};

enum class CompleteCode {
  kOk,
  kUnknownTask,
  kNotClaimed,
  kLeaseMismatch,
  kLeaseExpired,
  kAlreadyCompleted,
};
const char* complete_code_name(CompleteCode c);

class TaskStore {
 public:
  using Clock = std::function<double()>;  // seconds; injectable for tests

  explicit TaskStore(const std::filesystem::path& event_log_path,
                     Clock clock = nullptr);

  // Atomic: any duplicate task_id (within the file or against the store)
  // rejects the whole batch with Error(kValidation).
  size_t ingest(const std::vector<Task>& tasks);

  // At most one Open (or lease-expired) task, FIFO by ingest order. The
  // lease TTL defaults to twice the task budget so a wedged worker cannot
  // park a task forever, floored at 10s for degenerate budgets.
  std::optional<Task> claim(const std::string& client_id,
                            const std::string& worker_id,
                            std::optional<AnalysisKind> analysis_filter);

  CompleteCode complete(const std::string& task_id, const std::string& worker_id,
                        bool done, const std::string& report_ref);

  // Snapshot with effective status (expired leases read as Open).
  std::vector<Task> list(std::optional<TaskStatus> filter) const;
  std::map<std::string, size_t> status_counts() const;
  size_t size() const;

 private:
  void append_event(const nlohmann::json& ev);
  void replay_log();
  TaskStatus effective_status(const Task& t, double now) const;

  std::filesystem::path log_path_;
  Clock clock_;
  mutable std::mutex mu_;
  std::vector<Task> tasks_;  // ingest order
  std::map<std::string, size_t> index_;
  JsonlWriter writer_;
};

// Offline audit of an event log: replays claims/completes and reports any
// instant at which a task held two unexpired leases, plus per-task claim
// counts. This is the checkable form of the backend safety invariant.
struct AuditResult {
  bool ok = true;
  std::vector<std::string> violations;
  std::map<std::string, size_t> claims_per_task;
  size_t events = 0;
};
AuditResult audit_event_log(const std::filesystem::path& event_log_path);

}  // namespace anthill

#endif  // ANTHILL_BACKEND_STORE_H_
