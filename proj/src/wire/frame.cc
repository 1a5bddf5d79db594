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

#include "wire/frame.h"

namespace anthill {

const char* status_name(Status s) {
  switch (s) {
    case Status::kOk: return "ok";
    case Status::kPermissionDenied: return "permission_denied";
    case Status::kException: return "exception";
    case Status::kNoSuchService: return "no_such_service";
    case Status::kNoSuchTxn: return "no_such_txn";
  }
  return "?";
}

Bytes encode_request(const Request& req) {
  ByteWriter w;
  w.u32(kRequestMagic);
  w.u16(static_cast<uint16_t>(req.service.size()));
  w.str(req.service);
  w.u32(req.txn_id);
  w.u32(req.principal_id);
  w.bytes(req.payload);
  return w.take();
}

std::optional<Request> parse_request(const Bytes& body) {
  ByteReader r(body);
  uint32_t magic = 0;
  if (!r.u32(magic) || magic != kRequestMagic) return std::nullopt;
  uint16_t svclen = 0;
  if (!r.u16(svclen)) return std::nullopt;
  Request req;
  if (!r.str(svclen, req.service)) return std::nullopt;
  if (!r.u32(req.txn_id)) return std::nullopt;
  if (!r.u32(req.principal_id)) return std::nullopt;
  r.bytes(r.remaining(), req.payload);
  return req;
}

Bytes encode_response(const Response& resp) {
  ByteWriter w;
  w.u8(static_cast<uint8_t>(resp.status));
  switch (resp.status) {
    case Status::kOk:
      w.u32(static_cast<uint32_t>(resp.payload.size()));
      w.bytes(resp.payload);
      break;
    case Status::kPermissionDenied:
      w.u32(static_cast<uint32_t>(resp.permission.size()));
      w.str(resp.permission);
      break;
    case Status::kException:
      w.u32(static_cast<uint32_t>(resp.ex_class.size()));
      w.str(resp.ex_class);
      w.u32(static_cast<uint32_t>(resp.ex_message.size()));
      w.str(resp.ex_message);
      break;
    case Status::kNoSuchService:
    case Status::kNoSuchTxn:
      break;
  }
  return w.take();
}

std::optional<Response> parse_response(const Bytes& body) {
  ByteReader r(body);
  uint8_t status = 0;
  if (!r.u8(status)) return std::nullopt;
  if (status > static_cast<uint8_t>(Status::kNoSuchTxn)) return std::nullopt;
  Response resp;
  resp.status = static_cast<Status>(status);
  uint32_t len = 0;
  switch (resp.status) {
    case Status::kOk:
      if (!r.u32(len) || !r.bytes(len, resp.payload)) return std::nullopt;
      break;
    case Status::kPermissionDenied:
      if (!r.u32(len) || !r.str(len, resp.permission)) return std::nullopt;
      break;
    case Status::kException:
      if (!r.u32(len) || !r.str(len, resp.ex_class)) return std::nullopt;
      if (!r.u32(len) || !r.str(len, resp.ex_message)) return std::nullopt;
      break;
    case Status::kNoSuchService:
    case Status::kNoSuchTxn:
      break;
  }
  return resp;
}

Bytes encode_feedback(const FeedbackFrame& fb) {
  ByteWriter w;
  w.u64(fb.exec_seq);
  w.u32(static_cast<uint32_t>(fb.edges.size()));
  for (const auto& [idx, count] : fb.edges) {
    w.u32(idx);
    w.u32(count);
  }
  w.u32(fb.blocks_hit);
  w.u32(fb.block_universe);
  return w.take();
}

std::optional<FeedbackFrame> parse_feedback(const Bytes& body) {
  ByteReader r(body);
  FeedbackFrame fb;
  uint32_t n = 0;
  if (!r.u64(fb.exec_seq) || !r.u32(n)) return std::nullopt;
  fb.edges.reserve(n);
  for (uint32_t i = 0; i < n; ++i) {
    uint32_t idx = 0, count = 0;
    if (!r.u32(idx) || !r.u32(count)) return std::nullopt;
    fb.edges.emplace_back(idx, count);
  }
  if (!r.u32(fb.blocks_hit) || !r.u32(fb.block_universe)) return std::nullopt;
  return fb;
}

}  // namespace anthill
