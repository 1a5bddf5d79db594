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
// Request/response/feedback frame layout. Frames travel as length-prefixed
// blobs (common/net.h); this file defines the frame bodies. Documented in
// docs/wire-protocol.md and covered by round-trip tests; do not change
// without updating both.

#ifndef ANTHILL_WIRE_FRAME_H_
#define ANTHILL_WIRE_FRAME_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "common/bytes.h"
#include "wire/value.h"

namespace anthill {

inline constexpr uint32_t kRequestMagic = 0x4D46555A;

struct Request {
  std::string service;
  uint32_t txn_id = 0;
  uint32_t principal_id = 0;
  Bytes payload;  // raw TLV region; may be garbage when fuzzing
};

Bytes encode_request(const Request& req);
// nullopt on bad magic / truncated header.
std::optional<Request> parse_request(const Bytes& body);

enum class Status : uint8_t {
  kOk = 0,
  kPermissionDenied = 1,
  kException = 2,
  kNoSuchService = 3,
  kNoSuchTxn = 4,
};

const char* status_name(Status s);

struct Response {
  Status status = Status::kOk;
  Bytes payload;          // kOk
  std::string permission; // kPermissionDenied
  std::string ex_class;   // kException
  std::string ex_message; // kException

  static Response ok(Bytes payload) {
    Response r;
    r.status = Status::kOk;
    r.payload = std::move(payload);
    return r;
  }
  static Response denied(std::string permission) {
    Response r;
    r.status = Status::kPermissionDenied;
    r.permission = std::move(permission);
    return r;
  }
  static Response exception(std::string cls, std::string msg) {
    Response r;
    r.status = Status::kException;
    r.ex_class = std::move(cls);
    r.ex_message = std::move(msg);
    return r;
  }
  static Response no_such_service() { return Response{Status::kNoSuchService}; }
  static Response no_such_txn() { return Response{Status::kNoSuchTxn}; }
};

Bytes encode_response(const Response& resp);
std::optional<Response> parse_response(const Bytes& body);

// Per-execution coverage feedback pushed from an instrumented target to the
// input generator: one frame per dispatched (non-meta) request, in dispatch
// order. blocks_hit is the cumulative count of distinct blocks this session
// has touched for the request's API, so consumers can derive coverage
// fractions without block identities.
struct FeedbackFrame {
  uint64_t exec_seq = 0;
  std::vector<std::pair<uint32_t, uint32_t>> edges;  // (edge index, raw count)
  uint32_t blocks_hit = 0;
  uint32_t block_universe = 0;
};

Bytes encode_feedback(const FeedbackFrame& fb);
std::optional<FeedbackFrame> parse_feedback(const Bytes& body);

}  // namespace anthill

#endif  // ANTHILL_WIRE_FRAME_H_
