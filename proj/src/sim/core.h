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
// Dispatch core of the target simulator: a stateful multi-service middleware
// with per-API permission checks, block-level coverage emission, and seeded
// faults. The core is pure dispatch logic — process-level effects (holding
// the dispatcher lock during a freeze, aborting, killing the companion) are
// expressed as actions for the surrounding server to perform, which keeps
// every fault path unit-testable in process.
//
// Per request, in order: entry permission checks (before any argument
// decoding), argument decode ("BadParcel" exception on mismatch), body
// execution with coverage emission and deep permission checks, fault trigger
// evaluation.

#ifndef ANTHILL_SIM_CORE_H_
#define ANTHILL_SIM_CORE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "sim/log_sink.h"
#include "sim/manifest.h"
#include "wire/frame.h"

namespace anthill {

// Process-level consequence of one dispatch, to be executed by the server
// after the core returns.
enum class ExecAction {
  kRespond,       // normal reply
  kFreeze,        // hold the dispatcher lock until the watchdog intervenes
  kSoftReboot,    // drop every client connection, reset state, keep running
  kAbortProcess,  // the whole target dies (resource exhaustion, parse crash)
  kKillCompanion, // reply normally, then kill the companion process
};

struct ExecResult {
  ExecAction action = ExecAction::kRespond;
  Response response;
  bool emit_feedback = false;  // false for meta services and vanilla mode
  FeedbackFrame feedback;
};

// Mutable per-service state touched by behaviors; reset by soft reboots.
struct ServiceState {
  std::map<std::string, std::string> kv;
  int64_t counter = 0;
};

class SimCore {
 public:
  struct Options {
    uint64_t boot_nonce = 0;
    bool instrumented = true;  // false = vanilla: no feedback frames
  };

  SimCore(Manifest manifest, LogSink* log, Options options);

  // Externally synchronized: the server serializes calls through the global
  // dispatcher lock (deliberately — the freeze fault depends on it).
  ExecResult execute(const Request& req);

  // Resets all mutable service state; the reboot counter, watchdog history
  // and freeze poison survive, mirroring state that outlives a middleware
  // restart on a real device.
  void soft_reboot(const std::string& reason);

  bool poisoned() const { return poisoned_; }
  uint64_t state_digest() const;
  uint32_t reboot_count() const { return reboot_count_; }
  uint64_t exec_count() const { return exec_seq_; }
  uint32_t resource_slots_used() const { return resource_slots_used_; }
  const Manifest& manifest() const { return manifest_; }

  // Extra fields merged into the introspection reply (feedback_connected,
  // companion_alive ... ) — supplied by the server.
  void set_introspection_extra(std::function<nlohmann::json()> fn) {
    introspection_extra_ = std::move(fn);
  }
  void note_watchdog_kill() { ++watchdog_kills_; }

 private:
  struct MethodRuntime {
    const ServiceSpec* service = nullptr;
    const MethodSpec* method = nullptr;
    std::vector<uint64_t> block_ids;       // index 1..block_count
    std::set<uint32_t> session_blocks_hit; // cumulative distinct local blocks
  };

  ExecResult dispatch_meta(const Request& req);
  Response meta_list() const;
  Response meta_describe(const Request& req) const;
  Response meta_state_digest() const;
  Response meta_ground_truth() const;

  bool principal_has(uint32_t principal_id, const std::string& perm) const;
  bool trigger_fires(const TriggerSpec& t, const ValueList& args,
                     bool decode_failed, const Bytes& raw_payload) const;

  Manifest manifest_;
  LogSink* log_;
  Options options_;
  std::map<std::string, std::map<uint32_t, MethodRuntime>> runtime_;
  std::map<uint32_t, std::set<std::string>> principal_perms_;
  std::map<std::string, ServiceState> state_;
  uint32_t resource_slots_used_ = 0;
  uint32_t resource_limit_ = 1024;
  uint64_t exec_seq_ = 0;
  uint32_t reboot_count_ = 0;
  uint32_t watchdog_kills_ = 0;
  bool poisoned_ = false;
  int64_t boot_mono_ms_ = 0;
  std::function<nlohmann::json()> introspection_extra_;
};

// Target process exit codes, asserted by integration tests.
inline constexpr int kExitAbort = 66;     // resource exhaustion / parse crash
inline constexpr int kExitBootloop = 67;  // watchdog gave up restarting

}  // namespace anthill

#endif  // ANTHILL_SIM_CORE_H_
