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
// One task, end to end: launch a fresh instrumented instance, drive the
// configured generator against the task's API, watch monitors on a fixed
// cadence, snapshot, tear down on timeout or first crash candidate, verify
// candidates by replay on fresh vanilla instances, write the report. No
// state of run i is observable in run i+1 — instances are new processes.

#ifndef ANTHILL_WORKER_WORKER_H_
#define ANTHILL_WORKER_WORKER_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "json.hpp"

#include "backend/store.h"
#include "gen/generators.h"
#include "worker/heartbeat.h"

namespace anthill {

struct WorkerConfig {
  std::filesystem::path manifest;
  std::filesystem::path target_binary;  // default: the running executable
  std::filesystem::path surface;        // surface export for descriptor lookup
  std::filesystem::path pattern_table;  // empty = built-in table
  GenConfig generator;
  uint32_t principal_id = 0;
  double health_cadence_s = 1.0;
  double snapshot_cadence_s = 10.0;
  double boot_timeout_s = 15.0;
  int boot_retries = 2;
  int verify_attempts = 3;
  size_t max_verified_candidates = 4;
  double heartbeat_period_s = 2.0;

  static WorkerConfig from_json(const nlohmann::json& j);  // strict keys
  nlohmann::json to_json() const;
};

struct TaskRunResult {
  bool done = false;  // false = Failed
  nlohmann::json report;
};

// Heartbeat callback: the worker main loop publishes phase transitions and
// progress through it.
using HeartbeatFn =
    std::function<void(WorkerState, uint64_t execs, uint32_t instances)>;

TaskRunResult run_task(const Task& task, const WorkerConfig& config,
                       const std::filesystem::path& artifact_dir,
                       const std::string& worker_id,
                       const HeartbeatFn& heartbeat);

// Process entry for `worker run`: reads the task JSON from stdin, runs it,
// writes heartbeats, exits 0 on Done and 1 on Failed.
int run_worker_main(const std::filesystem::path& config_path,
                    const std::filesystem::path& artifact_dir,
                    const std::string& worker_id);

}  // namespace anthill

#endif  // ANTHILL_WORKER_WORKER_H_
