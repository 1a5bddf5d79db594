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

#include "gen/decode.h"

#include <cstring>

#include "common/error.h"

namespace anthill {

char sanitize_byte(uint8_t b) {
  if (b >= 0x20 && b <= 0x7E) return static_cast<char>(b);
  return static_cast<char>(0x20 + (b % 95));
}

namespace {

// Reads up to `width` bytes little-endian, zero-extending past the end.
uint64_t take_le(std::span<const uint8_t> buf, size_t& pos, size_t width) {
  uint64_t v = 0;
  for (size_t i = 0; i < width; ++i) {
    uint8_t b = pos < buf.size() ? buf[pos] : 0;
    if (pos < buf.size()) ++pos;
    v |= static_cast<uint64_t>(b) << (8 * i);
  }
  return v;
}

}  // namespace

ValueList decode_bytes(std::span<const uint8_t> buf,
                       const std::vector<ParamType>& params) {
  ValueList out;
  out.reserve(params.size());
  size_t pos = 0;
  for (const auto& p : params) {
    switch (p.tag) {
      case Tag::kBool: {
        uint64_t b = take_le(buf, pos, 1);
        out.push_back(Value::of_bool((b & 1) != 0));
        break;
      }
      case Tag::kI32:
        out.push_back(Value::of_i32(static_cast<int32_t>(take_le(buf, pos, 4))));
        break;
      case Tag::kI64:
        out.push_back(Value::of_i64(static_cast<int64_t>(take_le(buf, pos, 8))));
        break;
      case Tag::kF32: {
        uint32_t bits = static_cast<uint32_t>(take_le(buf, pos, 4));
        float f;
        std::memcpy(&f, &bits, 4);
        out.push_back(Value::of_f32(f));
        break;
      }
      case Tag::kF64: {
        uint64_t bits = take_le(buf, pos, 8);
        double d;
        std::memcpy(&d, &bits, 8);
        out.push_back(Value::of_f64(d));
        break;
      }
      case Tag::kStr: {
        size_t len = static_cast<size_t>(take_le(buf, pos, 1));
        std::string s;
        s.reserve(len);
        for (size_t i = 0; i < len && pos < buf.size(); ++i, ++pos)
          s.push_back(sanitize_byte(buf[pos]));
        out.push_back(Value::of_str(std::move(s)));
        break;
      }
      case Tag::kBlob:
      case Tag::kComposite:
        throw Error(ErrorKind::kConfig,
                    "byte decoding supports only primitive descriptors, got " +
                        p.to_string());
    }
  }
  return out;
}

Bytes encode_typed_bytes(const ValueList& values) {
  ByteWriter w;
  for (const auto& v : values) {
    switch (v.tag) {
      case Tag::kBool: w.u8(std::get<bool>(v.data) ? 1 : 0); break;
      case Tag::kI32: w.i32(std::get<int32_t>(v.data)); break;
      case Tag::kI64: w.i64(std::get<int64_t>(v.data)); break;
      case Tag::kF32: w.f32(std::get<float>(v.data)); break;
      case Tag::kF64: w.f64(std::get<double>(v.data)); break;
      case Tag::kStr: {
        const auto& s = std::get<std::string>(v.data);
        size_t len = s.size() > 255 ? 255 : s.size();
        w.u8(static_cast<uint8_t>(len));
        w.str(std::string_view(s).substr(0, len));
        break;
      }
      case Tag::kBlob:
      case Tag::kComposite:
        throw Error(ErrorKind::kConfig,
                    "byte encoding supports only primitive values");
    }
  }
  return w.take();
}

size_t min_encoded_size(const std::vector<ParamType>& params) {
  size_t n = 0;
  for (const auto& p : params) {
    switch (p.tag) {
      case Tag::kBool: n += 1; break;
      case Tag::kI32: n += 4; break;
      case Tag::kI64: n += 8; break;
      case Tag::kF32: n += 4; break;
      case Tag::kF64: n += 8; break;
      case Tag::kStr: n += 1; break;  // zero length byte
      case Tag::kBlob:
      case Tag::kComposite:
        throw Error(ErrorKind::kConfig,
                    "byte decoding supports only primitive descriptors");
    }
  }
  return n;
}

}  // namespace anthill
