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
// Process wrapper around SimCore: TCP listeners for requests and coverage
// feedback, the global dispatcher lock, the watchdog thread, and the
// companion subprocess. Request execution is deliberately serialized through
// one lock so a frozen body blocks the whole dispatcher, exactly the failure
// mode the watchdog exists for.

#ifndef ANTHILL_SIM_SERVER_H_
#define ANTHILL_SIM_SERVER_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>

#include "common/net.h"
#include "sim/core.h"

namespace anthill {

struct SimServerOptions {
  std::filesystem::path manifest_path;
  uint16_t port = 0;           // 0 = ephemeral
  bool instrument = false;     // open a feedback channel (port below)
  uint16_t feedback_port = 0;  // 0 = ephemeral (only when instrument)
  std::filesystem::path log_path;
  std::filesystem::path ready_file;  // written once serving
  uint64_t boot_nonce = 0;           // 0 = derived from pid and clock
  bool companion = true;
};

// Runs until killed. Fault consequences exit the process directly with
// kExitAbort / kExitBootloop.
int run_sim_server(const SimServerOptions& options);

}  // namespace anthill

#endif  // ANTHILL_SIM_SERVER_H_
