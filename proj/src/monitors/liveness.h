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

#ifndef ANTHILL_MONITORS_LIVENESS_H_
#define ANTHILL_MONITORS_LIVENESS_H_

#include <cstdint>
#include <string>

#include "sim/client.h"

namespace anthill {

enum class ComponentHealth { kHealthy, kDegraded, kDead };

const char* component_health_name(ComponentHealth h);

struct LivenessReport {
  ComponentHealth dispatcher = ComponentHealth::kDead;
  ComponentHealth companion = ComponentHealth::kHealthy;
  ComponentHealth feedback = ComponentHealth::kHealthy;

  bool dispatcher_dead() const { return dispatcher == ComponentHealth::kDead; }
};

// Off-target probes against one instance: dispatcher health via a no-op meta
// transaction (its own connection — degraded means the ping timed out while
// the process still accepts connections, the signature of a frozen
// dispatcher), companion via heartbeat-line recency in the target log,
// feedback channel via introspection.
class LivenessProbe {
 public:
  struct Options {
    int ping_timeout_ms = 250;
    double companion_stale_s = 3.0;  // heartbeats are written once a second
    bool expect_companion = true;
    bool expect_feedback = false;
  };

  LivenessProbe(std::string endpoint, Options options)
      : options_(options), client_(std::move(endpoint)) {}

  // `last_companion_heartbeat_us` comes from the caller's log tail (0 =
  // never seen); `process_alive` from the instance's child handle.
  LivenessReport probe(bool process_alive, int64_t last_companion_heartbeat_us,
                       int64_t now_us);

 private:
  Options options_;
  SimClient client_;
};

}  // namespace anthill

#endif  // ANTHILL_MONITORS_LIVENESS_H_
