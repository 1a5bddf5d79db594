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
// Input replay against a fresh instance: sends persisted records in order at
// full speed, watches the target log and process, and reports the observed
// crash signals. Replay does not reproduce inter-input delays; every seeded
// fault except the freeze is timing-insensitive, and the freeze depends only
// on the watchdog window, which dwarfs replay pacing.

#ifndef ANTHILL_VERIFY_REPLAY_H_
#define ANTHILL_VERIFY_REPLAY_H_

#include <array>
#include <optional>
#include <set>
#include <vector>

#include "coverage/coverage.h"
#include "gen/recorder.h"
#include "monitors/classify.h"
#include "worker/instance.h"

namespace anthill {

struct ReplayOptions {
  uint32_t principal_id = 0;
  int per_send_timeout_ms = 300;
  // After a stalled/rotten response, wait up to this long for the dispatcher
  // to come back (a soft reboot takes milliseconds; a freeze recovers only
  // via watchdog kill, one window later).
  double recover_wait_s = 12.0;
  double send_wall_cap_s = 45.0;
  // Observation after the last send: stop on process exit or once the log
  // stays quiet for the grace period (longer when watchdog evidence showed
  // up — the next kill of a bootloop cascade is a full window away).
  double quiet_grace_s = 3.0;
  double quiet_grace_watchdog_s = 14.0;
  double observe_max_s = 60.0;
};

struct ReplaySignals {
  std::vector<CrashCandidate> candidates;  // merged
  std::set<std::string> pattern_ids;       // every matched pattern id
  bool process_exited = false;
  int exit_code = 0;
  uint64_t sent = 0;
  uint64_t responded = 0;

  std::set<CrashClass> classes() const {
    std::set<CrashClass> out;
    for (const auto& c : candidates) out.insert(c.crash_class);
    return out;
  }
  bool has_class(CrashClass c) const { return classes().count(c) > 0; }
};

// Sends each record's raw frame in order; collects monitor signals during and
// after sending. The instance is probed and tailed but not torn down.
ReplaySignals replay_records(InstanceHandle& instance,
                             const std::vector<InputRecord>& records,
                             const PatternTable& patterns,
                             const ReplayOptions& options);

// Coverage-checking replay on an instrumented instance: folds the feedback
// frame of every response into a map and returns its bucketed form for
// bit-exact comparison against a recorded coverage.bin.
std::optional<std::array<uint8_t, kMapSize>> replay_coverage(
    InstanceHandle& instance, const std::vector<InputRecord>& records,
    const ReplayOptions& options);

}  // namespace anthill

#endif  // ANTHILL_VERIFY_REPLAY_H_
