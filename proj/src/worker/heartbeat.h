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
// Worker heartbeat: a single-line JSON status record rewritten atomically in
// the worker's artifact directory at least every few seconds. Troop reads it
// to supervise; a stale heartbeat marks the worker Dead.

#ifndef ANTHILL_WORKER_HEARTBEAT_H_
#define ANTHILL_WORKER_HEARTBEAT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

namespace anthill {

// Mirrors the worker pipeline phases plus supervisor-only states.
enum class WorkerState {
  kStarting,
  kBooting,
  kFuzzing,
  kSnapshotting,
  kVerifying,
  kReporting,
  kIdle,
  kDead,
};

const char* worker_state_name(WorkerState s);

struct WorkerHeartbeat {
  std::string worker_id;
  WorkerState state = WorkerState::kStarting;
  std::string current_task;  // empty = none
  int64_t heartbeat_at_us = 0;
  uint64_t execs_done = 0;
  uint32_t instance_generation = 0;
  int pid = 0;

  nlohmann::json to_json() const;
  static std::optional<WorkerHeartbeat> from_json(const nlohmann::json& j);
};

void write_heartbeat(const std::filesystem::path& path, const WorkerHeartbeat& hb);
std::optional<WorkerHeartbeat> read_heartbeat(const std::filesystem::path& path);

}  // namespace anthill

#endif  // ANTHILL_WORKER_HEARTBEAT_H_
