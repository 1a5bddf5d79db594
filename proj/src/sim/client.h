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

#ifndef ANTHILL_SIM_CLIENT_H_
#define ANTHILL_SIM_CLIENT_H_

#include <optional>
#include <string>

#include "json.hpp"

#include "common/net.h"
#include "wire/frame.h"

namespace anthill {

// Outcome of one request round trip. kDead covers connection refusal and
// drops — the caller decides whether that means target death or reboot.
struct CallResult {
  enum class Kind { kResponse, kTimeout, kDead };
  Kind kind = Kind::kDead;
  Response response;

  bool ok() const { return kind == Kind::kResponse; }
};

// Thin request/response client for one target endpoint. Reconnects lazily;
// a dropped connection surfaces as kDead on the call that hit it.
class SimClient {
 public:
  explicit SimClient(std::string endpoint) : endpoint_(std::move(endpoint)) {}

  const std::string& endpoint() const { return endpoint_; }

  CallResult call(const Request& req, int timeout_ms);

  // Health probe via the service manager's ping transaction.
  bool ping(int timeout_ms);

  // Meta-service wrappers. Return nullopt on any non-OK outcome.
  std::optional<nlohmann::json> list_services(int timeout_ms);
  std::optional<nlohmann::json> describe_service(const std::string& name,
                                                 int timeout_ms);
  std::optional<nlohmann::json> state_digest(int timeout_ms);
  std::optional<nlohmann::json> ground_truth(int timeout_ms);

  void disconnect();

 private:
  bool ensure_connected(int timeout_ms);
  std::optional<nlohmann::json> meta_json(const std::string& service,
                                          uint32_t txn, Bytes payload,
                                          int timeout_ms);

  std::string endpoint_;
  TcpConn conn_;
  bool connected_ = false;
};

}  // namespace anthill

#endif  // ANTHILL_SIM_CLIENT_H_
