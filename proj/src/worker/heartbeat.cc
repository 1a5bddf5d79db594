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

#include "worker/heartbeat.h"

#include "common/fs.h"

namespace anthill {

const char* worker_state_name(WorkerState s) {
  switch (s) {
    case WorkerState::kStarting: return "starting";
    case WorkerState::kBooting: return "booting";
    case WorkerState::kFuzzing: return "fuzzing";
    case WorkerState::kSnapshotting: return "snapshotting";
    case WorkerState::kVerifying: return "verifying";
    case WorkerState::kReporting: return "reporting";
    case WorkerState::kIdle: return "idle";
    case WorkerState::kDead: return "dead";
  }
  return "?";
}

namespace {
std::optional<WorkerState> worker_state_from_name(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(WorkerState::kDead); ++i) {
    auto st = static_cast<WorkerState>(i);
    if (s == worker_state_name(st)) return st;
  }
  return std::nullopt;
}
}  // namespace

nlohmann::json WorkerHeartbeat::to_json() const {
  return {{"worker_id", worker_id},
          {"state", worker_state_name(state)},
          {"current_task", current_task},
          {"heartbeat_at_us", heartbeat_at_us},
          {"execs_done", execs_done},
          {"instance_generation", instance_generation},
          {"pid", pid}};
}

std::optional<WorkerHeartbeat> WorkerHeartbeat::from_json(const nlohmann::json& j) {
  if (!j.is_object()) return std::nullopt;
  WorkerHeartbeat hb;
  hb.worker_id = j.value("worker_id", "");
  auto st = worker_state_from_name(j.value("state", ""));
  if (!st) return std::nullopt;
  hb.state = *st;
  hb.current_task = j.value("current_task", "");
  hb.heartbeat_at_us = j.value("heartbeat_at_us", int64_t{0});
  hb.execs_done = j.value("execs_done", uint64_t{0});
  hb.instance_generation = j.value("instance_generation", 0u);
  hb.pid = j.value("pid", 0);
  return hb;
}

void write_heartbeat(const std::filesystem::path& path, const WorkerHeartbeat& hb) {
  write_file_atomic(path, hb.to_json().dump() + "\n");
}

std::optional<WorkerHeartbeat> read_heartbeat(const std::filesystem::path& path) {
  auto text = read_file_if_exists(path);
  if (!text) return std::nullopt;
  auto j = nlohmann::json::parse(*text, nullptr, false);
  if (j.is_discarded()) return std::nullopt;
  return WorkerHeartbeat::from_json(j);
}

}  // namespace anthill
