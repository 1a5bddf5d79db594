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

#include "troop/troop.h"

#include <unistd.h>

#include <mutex>
#include <thread>
#include <vector>

#include "httplib.h"

#include "common/clock.h"
#include "common/error.h"
#include "common/fs.h"
#include "common/logging.h"
#include "common/proc.h"
#include "backend/http.h"

namespace anthill {

TroopConfig TroopConfig::from_json(const nlohmann::json& j) {
  static const char* kKeys[] = {"backend_url", "workers", "worker_binary",
                                "artifact_root", "heartbeat_stale_s",
                                "analysis", "worker", "status_port",
                                "client_id", "poll_s"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : kKeys) known |= (it.key() == k);
    if (!known)
      throw Error(ErrorKind::kConfig, "unknown troop config key '" + it.key() + "'");
  }
  TroopConfig c;
  c.backend_url = j.at("backend_url").get<std::string>();
  c.workers = j.value("workers", 1);
  c.worker_binary = j.value("worker_binary", std::string());
  if (c.worker_binary.empty()) c.worker_binary = self_exe_path();
  c.artifact_root = j.at("artifact_root").get<std::string>();
  c.heartbeat_stale_s = j.value("heartbeat_stale_s", 30.0);
  if (j.contains("analysis") && !j["analysis"].is_null()) {
    c.analysis = analysis_kind_from_name(j["analysis"].get<std::string>());
    if (!c.analysis)
      throw Error(ErrorKind::kConfig, "unknown analysis kind in troop config");
  }
  if (j.contains("worker")) c.worker = WorkerConfig::from_json(j["worker"]);
  c.status_port = j.value("status_port", 0);
  c.client_id = j.value("client_id", std::string());
  if (c.client_id.empty()) c.client_id = "troop-" + std::to_string(getpid());
  c.poll_s = j.value("poll_s", 0.3);
  return c;
}

nlohmann::json TroopConfig::to_json() const {
  nlohmann::json j;
  j["backend_url"] = backend_url;
  j["workers"] = workers;
  j["worker_binary"] = worker_binary.string();
  j["artifact_root"] = artifact_root.string();
  j["heartbeat_stale_s"] = heartbeat_stale_s;
  if (analysis) j["analysis"] = analysis_kind_name(*analysis);
  j["worker"] = worker.to_json();
  j["status_port"] = status_port;
  j["client_id"] = client_id;
  j["poll_s"] = poll_s;
  return j;
}

namespace {

const char kStatusPage[] = R"html(<!doctype html>
<html><head><title>troop status</title>
<style>
body { font-family: monospace; margin: 2em; }
table { border-collapse: collapse; }
td, th { border: 1px solid #999; padding: 4px 10px; text-align: left; }
th { background: #eee; }
</style></head>
<body>
<h2>troop status</h2>
<div id="agg"></div>
<table id="workers"><thead><tr>
<th>worker</th><th>state</th><th>task</th><th>execs</th><th>instances</th><th>heartbeat age (s)</th>
</tr></thead><tbody></tbody></table>
<script>
async function refresh() {
  const r = await fetch('/status');
  const j = await r.json();
  document.getElementById('agg').textContent =
    'tasks done: ' + j.aggregate.tasks_done + ' | failed: ' + j.aggregate.tasks_failed +
    ' | execs total: ' + j.aggregate.execs_done_total;
  const tb = document.querySelector('#workers tbody');
  tb.innerHTML = '';
  for (const w of j.workers) {
    const tr = document.createElement('tr');
    const age = w.heartbeat_at_us ? ((Date.now()*1000 - w.heartbeat_at_us)/1e6).toFixed(1) : '-';
    for (const v of [w.worker_id, w.state, w.current_task || '-', w.execs_done, w.instance_generation, age]) {
      const td = document.createElement('td');
      td.textContent = v;
      tr.appendChild(td);
    }
    tb.appendChild(tr);
  }
}
refresh(); setInterval(refresh, 1000);
</script></body></html>
)html";

struct Slot {
  std::string worker_id;
  std::optional<Task> task;
  Child child;
  std::filesystem::path dir;
  WorkerHeartbeat last_hb;
  bool have_hb = false;
  int64_t spawned_at_us = 0;
  bool dead_marked = false;
};

struct Aggregate {
  uint64_t tasks_done = 0;
  uint64_t tasks_failed = 0;
  uint64_t execs_completed = 0;  // from archived reports
  uint64_t respawns = 0;
};

}  // namespace

int run_troop(const TroopConfig& config, std::atomic<bool>& stop) {
  if (config.workers < 1)
    throw Error(ErrorKind::kConfig, "troop needs workers >= 1");

  std::filesystem::create_directories(config.artifact_root / "live");
  std::filesystem::create_directories(config.artifact_root / "archive");

  // Worker config file shared by all slots.
  std::filesystem::path worker_cfg_path = config.artifact_root / "worker_config.json";
  write_json_file(worker_cfg_path, config.worker.to_json());

  BackendClient backend(config.backend_url);
  std::vector<Slot> slots(static_cast<size_t>(config.workers));
  for (size_t i = 0; i < slots.size(); ++i)
    slots[i].worker_id = config.client_id + "-w" + std::to_string(i);

  std::mutex status_mu;
  nlohmann::json status_snapshot;
  Aggregate agg;

  auto update_snapshot = [&] {
    nlohmann::json workers = nlohmann::json::array();
    uint64_t live_execs = 0;
    for (const auto& s : slots) {
      nlohmann::json w;
      w["worker_id"] = s.worker_id;
      if (s.child.valid() && s.task) {
        if (s.dead_marked) {
          w["state"] = worker_state_name(WorkerState::kDead);
        } else if (s.have_hb) {
          w["state"] = worker_state_name(s.last_hb.state);
        } else {
          w["state"] = worker_state_name(WorkerState::kStarting);
        }
        w["current_task"] = s.task->task_id;
        w["heartbeat_at_us"] = s.have_hb ? s.last_hb.heartbeat_at_us : 0;
        w["execs_done"] = s.have_hb ? s.last_hb.execs_done : 0;
        w["instance_generation"] = s.have_hb ? s.last_hb.instance_generation : 0;
        live_execs += s.have_hb ? s.last_hb.execs_done : 0;
      } else {
        w["state"] = worker_state_name(WorkerState::kIdle);
        w["current_task"] = nullptr;
        w["heartbeat_at_us"] = 0;
        w["execs_done"] = 0;
        w["instance_generation"] = 0;
      }
      workers.push_back(std::move(w));
    }
    nlohmann::json snap;
    snap["client_id"] = config.client_id;
    snap["workers"] = workers;
    snap["aggregate"] = {{"tasks_done", agg.tasks_done},
                         {"tasks_failed", agg.tasks_failed},
                         {"execs_done_total", agg.execs_completed + live_execs},
                         {"respawns", agg.respawns}};
    std::lock_guard<std::mutex> lk(status_mu);
    status_snapshot = std::move(snap);
  };
  update_snapshot();

  // Status server: reads serve a copied snapshot and never touch supervision
  // state.
  httplib::Server status_server;
  status_server.Get("/status", [&](const httplib::Request&, httplib::Response& res) {
    nlohmann::json copy;
    {
      std::lock_guard<std::mutex> lk(status_mu);
      copy = status_snapshot;
    }
    res.set_content(copy.dump(), "application/json");
  });
  status_server.Get("/", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(kStatusPage, "text/html");
  });
  uint16_t status_port = config.status_port;
  if (status_port == 0) {
    int p = status_server.bind_to_any_port("127.0.0.1");
    if (p <= 0) throw Error(ErrorKind::kInfra, "status server bind failed");
    status_port = static_cast<uint16_t>(p);
  } else if (!status_server.bind_to_port("127.0.0.1", status_port)) {
    throw Error(ErrorKind::kRetryable, "status server bind failed");
  }
  std::thread status_thread([&] { status_server.listen_after_bind(); });
  log_info("troop", "running",
           {{"client_id", config.client_id},
            {"workers", config.workers},
            {"status_port", status_port},
            {"backend", config.backend_url}});

  double backoff_s = 0.5;
  int64_t next_claim_ms = 0;

  auto archive_slot = [&](Slot& s, bool done) {
    uint64_t execs = 0;
    auto report_text = read_file_if_exists(s.dir / "report.json");
    if (report_text) {
      auto j = nlohmann::json::parse(*report_text, nullptr, false);
      if (!j.is_discarded()) execs = j.value("execs_total", uint64_t{0});
    }
    agg.execs_completed += execs;
    std::filesystem::path dest = config.artifact_root / "archive" / s.task->task_id;
    std::error_code ec;
    std::filesystem::rename(s.dir, dest, ec);
    if (ec) {
      // Cross-device or partial state: fall back to copy.
      std::filesystem::copy(s.dir, dest,
                            std::filesystem::copy_options::recursive, ec);
      std::filesystem::remove_all(s.dir, ec);
    }
    std::string report_ref = (dest / "report.json").string();
    try {
      backend.complete(s.task->task_id, s.worker_id, done, report_ref);
    } catch (const Error& e) {
      log_warn("troop", "complete failed", {{"task", s.task->task_id}, {"err", e.what()}});
    }
    if (done)
      ++agg.tasks_done;
    else
      ++agg.tasks_failed;
    log_info("troop", "task finished",
             {{"task", s.task->task_id},
              {"worker", s.worker_id},
              {"status", done ? "done" : "failed"},
              {"execs", execs}});
    s.task.reset();
    s.child = Child();
    s.have_hb = false;
    s.dead_marked = false;
  };

  while (!stop.load()) {
    for (auto& s : slots) {
      if (stop.load()) break;
      if (s.child.valid() && s.task) {
        // Supervise a running worker.
        if (auto hb = read_heartbeat(s.dir / "heartbeat.json")) {
          s.last_hb = *hb;
          s.have_hb = true;
        }
        if (auto code = s.child.poll_exit()) {
          archive_slot(s, *code == 0);
          continue;
        }
        int64_t last_beat =
            s.have_hb ? s.last_hb.heartbeat_at_us : s.spawned_at_us;
        if (now_us() - last_beat >
            static_cast<int64_t>(config.heartbeat_stale_s * 1e6)) {
          // Stale worker: mark dead, kill, leave its lease to expire.
          log_warn("troop", "worker stale, respawning",
                   {{"worker", s.worker_id},
                    {"task", s.task ? s.task->task_id : ""}});
          s.dead_marked = true;
          update_snapshot();
          s.child.kill_now();
          ++agg.respawns;
          s.task.reset();
          s.child = Child();
          s.have_hb = false;
          s.dead_marked = false;
        }
        continue;
      }

      // Idle slot: try to claim.
      if (mono_ms() < next_claim_ms) continue;
      std::optional<Task> task;
      try {
        task = backend.claim(config.client_id, s.worker_id, config.analysis);
        backoff_s = 0.5;
      } catch (const Error&) {
        next_claim_ms = mono_ms() + static_cast<int64_t>(backoff_s * 1000);
        backoff_s = std::min(backoff_s * 2, 30.0);
        continue;
      }
      if (!task) continue;
      s.task = task;
      s.dir = config.artifact_root / "live" /
              (s.worker_id + "-" + task->task_id);
      std::filesystem::create_directories(s.dir);
      SpawnOptions opts;
      opts.stdin_data = task->to_json().dump();
      opts.stderr_path = (s.dir / "worker.log").string();
      s.child = spawn({config.worker_binary.string(), "worker", "run",
                       "--config", worker_cfg_path.string(),
                       "--artifact-dir", s.dir.string(),
                       "--worker-id", s.worker_id},
                      opts);
      s.spawned_at_us = now_us();
      s.have_hb = false;
      log_info("troop", "dispatched",
               {{"task", task->task_id}, {"worker", s.worker_id}});
    }
    update_snapshot();
    sleep_ms(static_cast<int64_t>(config.poll_s * 1000));
  }

  // Shutdown: stop workers, leave their leases to expire.
  for (auto& s : slots)
    if (s.child.valid()) s.child.terminate(1000);
  update_snapshot();
  status_server.stop();
  status_thread.join();
  return 0;
}

}  // namespace anthill
