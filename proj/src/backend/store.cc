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

#include "backend/store.h"

#include <algorithm>
#include <set>

#include "common/clock.h"
#include "common/error.h"

namespace anthill {

const char* analysis_kind_name(AnalysisKind k) {
  switch (k) {
    case AnalysisKind::kVulnHunt: return "vuln_hunt";
    case AnalysisKind::kPermMap: return "perm_map";
    case AnalysisKind::kReplay: return "replay";
  }
  return "?";
}

std::optional<AnalysisKind> analysis_kind_from_name(const std::string& s) {
  if (s == "vuln_hunt") return AnalysisKind::kVulnHunt;
  if (s == "perm_map") return AnalysisKind::kPermMap;
  if (s == "replay") return AnalysisKind::kReplay;
  return std::nullopt;
}

const char* task_status_name(TaskStatus s) {
  switch (s) {
    case TaskStatus::kOpen: return "open";
    case TaskStatus::kClaimed: return "claimed";
    case TaskStatus::kDone: return "done";
    case TaskStatus::kFailed: return "failed";
  }
  return "?";
}

const char* complete_code_name(CompleteCode c) {
  switch (c) {
    case CompleteCode::kOk: return "ok";
    case CompleteCode::kUnknownTask: return "unknown_task";
    case CompleteCode::kNotClaimed: return "not_claimed";
    case CompleteCode::kLeaseMismatch: return "lease_mismatch";
    case CompleteCode::kLeaseExpired: return "lease_expired";
    case CompleteCode::kAlreadyCompleted: return "already_completed";
  }
  return "?";
}

nlohmann::json Task::to_json() const {
  nlohmann::json j;
  j["task_id"] = task_id;
  auto refs = nlohmann::json::array();
  for (const auto& r : api_refs)
    refs.push_back({{"service", r.service}, {"txn_id", r.txn_id}});
  j["api_refs"] = refs;
  j["analysis"] = analysis_kind_name(analysis);
  j["budget_s"] = budget_s;
  j["status"] = task_status_name(status);
  if (lease) {
    j["lease"] = {{"client_id", lease->client_id},
                  {"worker_id", lease->worker_id},
                  {"granted_at_s", lease->granted_at_s},
                  {"ttl_s", lease->ttl_s}};
  } else {
    j["lease"] = nullptr;
  }
  j["report_ref"] = report_ref;
  return j;
}

Task Task::from_json(const nlohmann::json& j) {
  Task t;
  t.task_id = j.at("task_id").get<std::string>();
  if (t.task_id.empty())
    throw Error(ErrorKind::kValidation, "task_id must be non-empty");
  for (const auto& rj : j.at("api_refs")) {
    ApiRef r;
    r.service = rj.at("service").get<std::string>();
    r.txn_id = rj.at("txn_id").get<uint32_t>();
    t.api_refs.push_back(std::move(r));
  }
  if (t.api_refs.empty())
    throw Error(ErrorKind::kValidation,
                "task " + t.task_id + " needs at least one api_ref");
  auto kind = analysis_kind_from_name(j.value("analysis", "vuln_hunt"));
  if (!kind)
    throw Error(ErrorKind::kValidation,
                "unknown analysis kind in task " + t.task_id);
  t.analysis = *kind;
  t.budget_s = j.value("budget_s", 60.0);
  if (t.budget_s < 0)
    throw Error(ErrorKind::kValidation, "budget_s must be >= 0");
  if (j.contains("lease") && !j["lease"].is_null()) {
    Lease l;
    const auto& lj = j["lease"];
    l.client_id = lj.value("client_id", "");
    l.worker_id = lj.value("worker_id", "");
    l.granted_at_s = lj.value("granted_at_s", 0.0);
    l.ttl_s = lj.value("ttl_s", 0.0);
    t.lease = l;
  }
  std::string st = j.value("status", "open");
  if (st == "claimed") t.status = TaskStatus::kClaimed;
  else if (st == "done") t.status = TaskStatus::kDone;
  else if (st == "failed") t.status = TaskStatus::kFailed;
  else t.status = TaskStatus::kOpen;
  t.report_ref = j.value("report_ref", "");
  return t;
}

TaskStore::TaskStore(const std::filesystem::path& event_log_path, Clock clock)
    : log_path_(event_log_path),
      clock_(clock ? std::move(clock) : [] { return now_s(); }) {
  replay_log();
  writer_.open(log_path_);
}

void TaskStore::append_event(const nlohmann::json& ev) {
  writer_.append(ev);
}

void TaskStore::replay_log() {
  for (const auto& ev : read_jsonl(log_path_)) {
    std::string kind = ev.value("ev", "");
    if (kind == "ingest") {
      Task t = Task::from_json(ev.at("task"));
      t.status = TaskStatus::kOpen;
      t.lease.reset();
      index_[t.task_id] = tasks_.size();
      tasks_.push_back(std::move(t));
    } else if (kind == "claim") {
      auto it = index_.find(ev.value("task_id", ""));
      if (it == index_.end()) continue;
      Task& t = tasks_[it->second];
      Lease l;
      l.client_id = ev.value("client_id", "");
      l.worker_id = ev.value("worker_id", "");
      l.granted_at_s = ev.value("granted_at_s", 0.0);
      l.ttl_s = ev.value("ttl_s", 0.0);
      t.lease = l;
      t.status = TaskStatus::kClaimed;
    } else if (kind == "complete") {
      auto it = index_.find(ev.value("task_id", ""));
      if (it == index_.end()) continue;
      Task& t = tasks_[it->second];
      t.status = ev.value("status", "") == "done" ? TaskStatus::kDone
                                                  : TaskStatus::kFailed;
      t.report_ref = ev.value("report_ref", "");
      t.lease.reset();
    }
    // "reclaim" events only matter for auditing; claim state is rebuilt from
    // the subsequent claim event.
  }
}

TaskStatus TaskStore::effective_status(const Task& t, double now) const {
  if (t.status == TaskStatus::kClaimed && t.lease && t.lease->expired(now))
    return TaskStatus::kOpen;
  return t.status;
}

size_t TaskStore::ingest(const std::vector<Task>& tasks) {
  std::lock_guard<std::mutex> lock(mu_);
  std::set<std::string> seen;
  std::vector<std::string> dups;
  for (const auto& t : tasks) {
    if (!seen.insert(t.task_id).second || index_.count(t.task_id))
      dups.push_back(t.task_id);
  }
  if (!dups.empty()) {
    std::string msg = "duplicate task ids: ";
    for (size_t i = 0; i < dups.size(); ++i) msg += (i ? ", " : "") + dups[i];
    throw Error(ErrorKind::kValidation, msg);
  }
  for (const auto& t : tasks) {
    Task stored = t;
    stored.status = TaskStatus::kOpen;
    stored.lease.reset();
    index_[stored.task_id] = tasks_.size();
    tasks_.push_back(stored);
    append_event({{"ev", "ingest"}, {"ts_s", clock_()}, {"task", stored.to_json()}});
  }
  return tasks.size();
}

std::optional<Task> TaskStore::claim(const std::string& client_id,
                                     const std::string& worker_id,
                                     std::optional<AnalysisKind> filter) {
  std::lock_guard<std::mutex> lock(mu_);
  double now = clock_();
  for (auto& t : tasks_) {
    if (filter && t.analysis != *filter) continue;
    TaskStatus eff = effective_status(t, now);
    if (eff != TaskStatus::kOpen) continue;
    if (t.status == TaskStatus::kClaimed) {
      // Expired lease being recycled.
      append_event({{"ev", "reclaim"},
                    {"ts_s", now},
                    {"task_id", t.task_id},
                    {"expired_worker", t.lease ? t.lease->worker_id : ""}});
    }
    Lease l;
    l.client_id = client_id;
    l.worker_id = worker_id;
    l.granted_at_s = now;
    l.ttl_s = std::max(2.0 * t.budget_s, 10.0);
    t.lease = l;
    t.status = TaskStatus::kClaimed;
    append_event({{"ev", "claim"},
                  {"ts_s", now},
                  {"task_id", t.task_id},
                  {"client_id", client_id},
                  {"worker_id", worker_id},
                  {"granted_at_s", l.granted_at_s},
                  {"ttl_s", l.ttl_s}});
    return t;
  }
  return std::nullopt;
}

CompleteCode TaskStore::complete(const std::string& task_id,
                                 const std::string& worker_id, bool done,
                                 const std::string& report_ref) {
  std::lock_guard<std::mutex> lock(mu_);
  double now = clock_();
  auto it = index_.find(task_id);
  if (it == index_.end()) return CompleteCode::kUnknownTask;
  Task& t = tasks_[it->second];
  if (t.status == TaskStatus::kDone || t.status == TaskStatus::kFailed)
    return CompleteCode::kAlreadyCompleted;
  if (t.status != TaskStatus::kClaimed || !t.lease)
    return CompleteCode::kNotClaimed;
  if (t.lease->worker_id != worker_id) return CompleteCode::kLeaseMismatch;
  if (t.lease->expired(now)) return CompleteCode::kLeaseExpired;
  t.status = done ? TaskStatus::kDone : TaskStatus::kFailed;
  t.report_ref = report_ref;
  t.lease.reset();
  append_event({{"ev", "complete"},
                {"ts_s", now},
                {"task_id", task_id},
                {"worker_id", worker_id},
                {"status", done ? "done" : "failed"},
                {"report_ref", report_ref}});
  return CompleteCode::kOk;
}

std::vector<Task> TaskStore::list(std::optional<TaskStatus> filter) const {
  std::lock_guard<std::mutex> lock(mu_);
  double now = clock_();
  std::vector<Task> out;
  for (const auto& t : tasks_) {
    Task copy = t;
    copy.status = effective_status(t, now);
    if (copy.status == TaskStatus::kOpen) copy.lease.reset();
    if (!filter || copy.status == *filter) out.push_back(std::move(copy));
  }
  return out;
}

std::map<std::string, size_t> TaskStore::status_counts() const {
  std::map<std::string, size_t> counts = {
      {"open", 0}, {"claimed", 0}, {"done", 0}, {"failed", 0}};
  for (const auto& t : list(std::nullopt)) ++counts[task_status_name(t.status)];
  return counts;
}

size_t TaskStore::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return tasks_.size();
}

AuditResult audit_event_log(const std::filesystem::path& event_log_path) {
  AuditResult res;
  struct LeaseSpan {
    double from = 0, to = 0;  // [granted, end)
  };
  std::map<std::string, std::vector<LeaseSpan>> spans;
  std::map<std::string, LeaseSpan*> open_lease;
  std::map<std::string, bool> completed;

  for (const auto& ev : read_jsonl(event_log_path)) {
    ++res.events;
    std::string kind = ev.value("ev", "");
    std::string task_id = ev.value("task_id", "");
    double ts = ev.value("ts_s", 0.0);
    if (kind == "claim") {
      ++res.claims_per_task[task_id];
      if (completed[task_id]) {
        res.ok = false;
        res.violations.push_back("claim after completion of " + task_id);
      }
      auto& vec = spans[task_id];
      double granted = ev.value("granted_at_s", ts);
      double ttl = ev.value("ttl_s", 0.0);
      // A new claim must not start while a previous lease is live.
      if (auto it = open_lease.find(task_id);
          it != open_lease.end() && it->second && granted < it->second->to) {
        res.ok = false;
        res.violations.push_back("overlapping lease on " + task_id);
      }
      vec.push_back({granted, granted + ttl});
      open_lease[task_id] = &vec.back();
    } else if (kind == "complete") {
      completed[task_id] = true;
      if (auto it = open_lease.find(task_id);
          it != open_lease.end() && it->second) {
        // Completion ends the lease early.
        it->second->to = std::min(it->second->to, ts);
        it->second = nullptr;
      }
    }
  }
  return res;
}

}  // namespace anthill
