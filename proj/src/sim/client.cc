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

#include "sim/client.h"

#include "sim/meta.h"

namespace anthill {

bool SimClient::ensure_connected(int timeout_ms) {
  if (connected_ && conn_.valid()) return true;
  auto [host, port] = parse_endpoint(endpoint_);
  auto conn = TcpConn::connect(host, port, timeout_ms);
  if (!conn) return false;
  conn_ = std::move(*conn);
  connected_ = true;
  return true;
}

void SimClient::disconnect() {
  conn_.close();
  connected_ = false;
}

CallResult SimClient::call(const Request& req, int timeout_ms) {
  CallResult res;
  if (!ensure_connected(timeout_ms)) {
    res.kind = CallResult::Kind::kDead;
    return res;
  }
  Bytes body = encode_request(req);
  if (conn_.send_frame(body) != IoStatus::kOk) {
    // Stale connection from a previous reboot; one reconnect attempt.
    disconnect();
    if (!ensure_connected(timeout_ms) ||
        conn_.send_frame(body) != IoStatus::kOk) {
      res.kind = CallResult::Kind::kDead;
      return res;
    }
  }
  Bytes reply;
  IoStatus st = conn_.recv_frame(reply, timeout_ms);
  if (st == IoStatus::kTimeout) {
    // The response for this request may still arrive later; the connection
    // can no longer be matched to requests, so drop it.
    disconnect();
    res.kind = CallResult::Kind::kTimeout;
    return res;
  }
  if (st != IoStatus::kOk) {
    disconnect();
    res.kind = CallResult::Kind::kDead;
    return res;
  }
  auto parsed = parse_response(reply);
  if (!parsed) {
    disconnect();
    res.kind = CallResult::Kind::kDead;
    return res;
  }
  res.kind = CallResult::Kind::kResponse;
  res.response = std::move(*parsed);
  return res;
}

bool SimClient::ping(int timeout_ms) {
  Request req;
  req.service = kManagerService;
  req.txn_id = kTxnPing;
  auto res = call(req, timeout_ms);
  return res.ok() && res.response.status == Status::kOk;
}

std::optional<nlohmann::json> SimClient::meta_json(const std::string& service,
                                                   uint32_t txn, Bytes payload,
                                                   int timeout_ms) {
  Request req;
  req.service = service;
  req.txn_id = txn;
  req.payload = std::move(payload);
  auto res = call(req, timeout_ms);
  if (!res.ok() || res.response.status != Status::kOk) return std::nullopt;
  try {
    return nlohmann::json::parse(res.response.payload.begin(),
                                 res.response.payload.end());
  } catch (const nlohmann::json::parse_error&) {
    return std::nullopt;
  }
}

std::optional<nlohmann::json> SimClient::list_services(int timeout_ms) {
  return meta_json(kManagerService, kTxnListServices, {}, timeout_ms);
}

std::optional<nlohmann::json> SimClient::describe_service(
    const std::string& name, int timeout_ms) {
  return meta_json(kManagerService, kTxnDescribeService,
                   encode_values({Value::of_str(name)}), timeout_ms);
}

std::optional<nlohmann::json> SimClient::state_digest(int timeout_ms) {
  return meta_json(kIntrospectService, kTxnStateDigest, {}, timeout_ms);
}

std::optional<nlohmann::json> SimClient::ground_truth(int timeout_ms) {
  return meta_json(kIntrospectService, kTxnGroundTruth, {}, timeout_ms);
}

}  // namespace anthill
