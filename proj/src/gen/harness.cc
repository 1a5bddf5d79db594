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

#include "gen/harness.h"

namespace anthill {

nlohmann::json outcome_json(const ExecOutcome& o) {
  switch (o.kind) {
    case ExecOutcome::Kind::kTimeout:
      return outcome_status("timeout");
    case ExecOutcome::Kind::kTargetDeath:
      return outcome_status("target_death");
    case ExecOutcome::Kind::kResponse:
      break;
  }
  switch (o.response.status) {
    case Status::kOk:
      return outcome_ok();
    case Status::kPermissionDenied:
      return outcome_denied(o.response.permission);
    case Status::kException:
      return outcome_exception(o.response.ex_class, o.response.ex_message);
    case Status::kNoSuchService:
      return outcome_status("no_such_service");
    case Status::kNoSuchTxn:
      return outcome_status("no_such_txn");
  }
  return outcome_status("unknown");
}

Harness::Harness(Options options, InputRecorder* recorder)
    : options_(std::move(options)),
      recorder_(recorder),
      client_(options_.endpoint) {}

bool Harness::ensure_feedback() {
  if (!feedback_enabled()) return false;
  if (feedback_connected_ && feedback_.valid()) return true;
  auto [host, port] = parse_endpoint(*options_.feedback_endpoint);
  auto conn = TcpConn::connect(host, port, 1000);
  if (!conn) return false;
  feedback_ = std::move(*conn);
  feedback_connected_ = true;
  drain_feedback();
  return true;
}

void Harness::drain_feedback() {
  Bytes junk;
  while (feedback_.valid() &&
         feedback_.recv_frame(junk, 0) == IoStatus::kOk) {
  }
}

void Harness::resync() {
  client_.disconnect();
  if (feedback_connected_) {
    feedback_.close();
    feedback_connected_ = false;
  }
}

ExecOutcome Harness::send(const std::string& service, uint32_t txn_id,
                          const Bytes& payload,
                          const std::optional<ValueList>& decoded) {
  ExecOutcome out;
  // The feedback channel must be up before the request leaves, or the frame
  // for this execution is dropped by the target and pairing drifts.
  if (feedback_enabled()) ensure_feedback();

  out.seq = recorder_->begin(service, txn_id, payload, decoded);

  Request req;
  req.service = service;
  req.txn_id = txn_id;
  req.principal_id = options_.principal_id;
  req.payload = payload;
  CallResult res = client_.call(req, options_.response_timeout_ms);

  switch (res.kind) {
    case CallResult::Kind::kResponse: {
      out.kind = ExecOutcome::Kind::kResponse;
      out.response = std::move(res.response);
      if (feedback_connected_) {
        Bytes body;
        IoStatus st = feedback_.recv_frame(body, options_.feedback_timeout_ms);
        if (st == IoStatus::kOk) {
          out.feedback = parse_feedback(body);
        } else {
          // Lost pairing; start clean on the next execution.
          resync();
        }
      }
      break;
    }
    case CallResult::Kind::kTimeout:
      out.kind = ExecOutcome::Kind::kTimeout;
      resync();
      break;
    case CallResult::Kind::kDead:
      out.kind = ExecOutcome::Kind::kTargetDeath;
      resync();
      break;
  }
  recorder_->finish(out.seq, outcome_json(out));
  return out;
}

}  // namespace anthill
