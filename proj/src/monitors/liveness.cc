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

#include "monitors/liveness.h"

#include "sim/meta.h"

namespace anthill {

const char* component_health_name(ComponentHealth h) {
  switch (h) {
    case ComponentHealth::kHealthy: return "healthy";
    case ComponentHealth::kDegraded: return "degraded";
    case ComponentHealth::kDead: return "dead";
  }
  return "?";
}

LivenessReport LivenessProbe::probe(bool process_alive,
                                    int64_t last_companion_heartbeat_us,
                                    int64_t now_us) {
  LivenessReport report;

  if (!process_alive) {
    report.dispatcher = ComponentHealth::kDead;
  } else {
    Request req;
    req.service = kManagerService;
    req.txn_id = kTxnPing;
    CallResult res = client_.call(req, options_.ping_timeout_ms);
    switch (res.kind) {
      case CallResult::Kind::kResponse:
        report.dispatcher = ComponentHealth::kHealthy;
        break;
      case CallResult::Kind::kTimeout:
        // Connection accepted but no reply: dispatcher wedged.
        report.dispatcher = ComponentHealth::kDegraded;
        break;
      case CallResult::Kind::kDead:
        report.dispatcher = ComponentHealth::kDead;
        break;
    }
  }

  if (!options_.expect_companion) {
    report.companion = ComponentHealth::kHealthy;
  } else if (last_companion_heartbeat_us == 0) {
    report.companion = ComponentHealth::kDegraded;  // not seen yet
  } else if (now_us - last_companion_heartbeat_us >
             static_cast<int64_t>(options_.companion_stale_s * 1e6)) {
    report.companion = ComponentHealth::kDead;
  } else {
    report.companion = ComponentHealth::kHealthy;
  }

  if (!options_.expect_feedback) {
    report.feedback = ComponentHealth::kHealthy;
  } else if (report.dispatcher == ComponentHealth::kHealthy) {
    auto intro = client_.state_digest(options_.ping_timeout_ms);
    report.feedback = intro && intro->value("feedback_connected", false)
                          ? ComponentHealth::kHealthy
                          : ComponentHealth::kDegraded;
  } else {
    report.feedback = ComponentHealth::kDegraded;
  }
  return report;
}

}  // namespace anthill
