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
// Per-client orchestrator: keeps the configured number of workers busy with
// tasks claimed from the backend, monitors their heartbeats, respawns dead
// ones (leaving their leases to expire), archives artifacts, and serves a
// live status view. Contains no analysis logic — it behaves the same
// whether its workers fuzz, replay, or map permissions.

#ifndef ANTHILL_TROOP_TROOP_H_
#define ANTHILL_TROOP_TROOP_H_

#include <atomic>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "backend/store.h"
#include "worker/worker.h"

namespace anthill {

struct TroopConfig {
  std::string backend_url;
  int workers = 1;
  std::filesystem::path worker_binary;  // default: running executable
  std::filesystem::path artifact_root;
  double heartbeat_stale_s = 30.0;
  std::optional<AnalysisKind> analysis;  // claim filter
  WorkerConfig worker;
  uint16_t status_port = 0;  // 0 = ephemeral
  std::string client_id;     // default troop-<pid>
  double poll_s = 0.3;

  static TroopConfig from_json(const nlohmann::json& j);  // strict keys
  nlohmann::json to_json() const;
};

// Runs the supervision loop until `stop` turns true (SIGTERM sets it in the
// CLI). Throws Error(kConfig) on workers < 1.
int run_troop(const TroopConfig& config, std::atomic<bool>& stop);

}  // namespace anthill

#endif  // ANTHILL_TROOP_TROOP_H_
