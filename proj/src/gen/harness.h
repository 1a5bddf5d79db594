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
// The harness bridges generator and target: it frames a generated input for
// the wire, persists the input record before sending, carries the response
// back, and (on instrumented targets) reads the per-execution coverage
// feedback frame that pairs with the request. Connection drops are surfaced
// as target-death signals, not errors — the generator decides how to go on.

#ifndef ANTHILL_GEN_HARNESS_H_
#define ANTHILL_GEN_HARNESS_H_

#include <optional>
#include <string>

#include "common/net.h"
#include "gen/recorder.h"
#include "sim/client.h"
#include "wire/frame.h"

namespace anthill {

struct ExecOutcome {
  enum class Kind { kResponse, kTimeout, kTargetDeath };
  Kind kind = Kind::kTargetDeath;
  uint64_t seq = 0;  // input record sequence number
  Response response;
  std::optional<FeedbackFrame> feedback;

  bool has_response() const { return kind == Kind::kResponse; }
};

nlohmann::json outcome_json(const ExecOutcome& o);

class Harness {
 public:
  struct Options {
    std::string endpoint;
    std::optional<std::string> feedback_endpoint;
    uint32_t principal_id = 0;
    int response_timeout_ms = 2000;
    int feedback_timeout_ms = 2000;
  };

  Harness(Options options, InputRecorder* recorder);

  // Frames and sends one invocation. `decoded` is recorded alongside the raw
  // payload when the generator works on typed values.
  ExecOutcome send(const std::string& service, uint32_t txn_id,
                   const Bytes& payload,
                   const std::optional<ValueList>& decoded);

  // Drops and re-establishes connections; stale feedback frames are drained
  // so execution/feedback pairing stays aligned.
  void resync();

  bool feedback_enabled() const { return options_.feedback_endpoint.has_value(); }

 private:
  bool ensure_feedback();
  void drain_feedback();

  Options options_;
  InputRecorder* recorder_;
  SimClient client_;
  TcpConn feedback_;
  bool feedback_connected_ = false;
};

}  // namespace anthill

#endif  // ANTHILL_GEN_HARNESS_H_
