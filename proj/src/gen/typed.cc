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

#include "gen/typed.h"

#include <limits>

#include "common/error.h"

namespace anthill {

namespace {

const int64_t kI32Bounds[] = {0, 1, -1, std::numeric_limits<int32_t>::min(),
                              std::numeric_limits<int32_t>::max()};
const int64_t kI64Bounds[] = {0, 1, -1, std::numeric_limits<int64_t>::min(),
                              std::numeric_limits<int64_t>::max()};
const double kFloatSpecials[] = {0.0, -0.0, 1.0, -1.0, 1e38, -1e38,
                                 std::numeric_limits<double>::quiet_NaN()};

const char* kStringTokens[] = {
    "", "a", "AAAA", "%s%s%s%s", "%n", "../../etc", "null",
    "\xF0\x9F\x90\x9C", "0", "-1", " ", "com.sim.pkg",
};

}  // namespace

Value TypedGen::generate(const ParamType& type) {
  switch (type.tag) {
    case Tag::kBool:
      return Value::of_bool((u64() & 1) != 0);
    case Tag::kI32: {
      if (unit() < kIntBoundaryWeight)
        return Value::of_i32(static_cast<int32_t>(kI32Bounds[u64() % 5]));
      return Value::of_i32(static_cast<int32_t>(u64()));
    }
    case Tag::kI64: {
      if (unit() < kIntBoundaryWeight)
        return Value::of_i64(kI64Bounds[u64() % 5]);
      return Value::of_i64(static_cast<int64_t>(u64()));
    }
    case Tag::kF32: {
      if (unit() < kIntBoundaryWeight)
        return Value::of_f32(static_cast<float>(kFloatSpecials[u64() % 7]));
      return Value::of_f32(static_cast<float>(
          std::uniform_real_distribution<double>(-1e9, 1e9)(rng_)));
    }
    case Tag::kF64: {
      if (unit() < kIntBoundaryWeight)
        return Value::of_f64(kFloatSpecials[u64() % 7]);
      return Value::of_f64(
          std::uniform_real_distribution<double>(-1e9, 1e9)(rng_));
    }
    case Tag::kStr: {
      if (unit() < 0.25) {
        return Value::of_str(kStringTokens[u64() % 12]);
      }
      size_t len = u64() % 257;  // lengths 0-256
      std::string s;
      s.reserve(len);
      for (size_t i = 0; i < len; ++i)
        s.push_back(static_cast<char>(0x20 + (u64() % 95)));
      return Value::of_str(std::move(s));
    }
    case Tag::kBlob: {
      size_t len = u64() % 513;
      Bytes b(len);
      for (auto& x : b) x = static_cast<uint8_t>(u64());
      return Value::of_blob(std::move(b));
    }
    case Tag::kComposite: {
      ValueList elems;
      elems.reserve(type.elems.size());
      for (const auto& e : type.elems) elems.push_back(generate(e));
      return Value::of_composite(std::move(elems));
    }
  }
  throw Error(ErrorKind::kConfig, "unsupported param tag");
}

ValueList TypedGen::generate_list(const std::vector<ParamType>& params) {
  ValueList out;
  out.reserve(params.size());
  for (const auto& p : params) out.push_back(generate(p));
  return out;
}

void TypedGen::mutate(Value& v) {
  switch (v.tag) {
    case Tag::kBool:
      v = Value::of_bool(!std::get<bool>(v.data));
      return;
    case Tag::kI32: {
      int32_t x = std::get<int32_t>(v.data);
      if (unit() < 0.3) {
        v = Value::of_i32(static_cast<int32_t>(kI32Bounds[u64() % 5]));
      } else {
        int64_t step = static_cast<int64_t>(u64() % 35) + 1;
        v = Value::of_i32(static_cast<int32_t>((u64() & 1) ? x + step : x - step));
      }
      return;
    }
    case Tag::kI64: {
      int64_t x = std::get<int64_t>(v.data);
      if (unit() < 0.3) {
        v = Value::of_i64(kI64Bounds[u64() % 5]);
      } else {
        int64_t step = static_cast<int64_t>(u64() % 35) + 1;
        v = Value::of_i64((u64() & 1) ? x + step : x - step);
      }
      return;
    }
    case Tag::kF32: {
      float x = std::get<float>(v.data);
      if (unit() < 0.3)
        v = Value::of_f32(static_cast<float>(kFloatSpecials[u64() % 7]));
      else
        v = Value::of_f32(x * ((u64() & 1) ? 2.0f : 0.5f) +
                          static_cast<float>(static_cast<int64_t>(u64() % 7) - 3));
      return;
    }
    case Tag::kF64: {
      double x = std::get<double>(v.data);
      if (unit() < 0.3)
        v = Value::of_f64(kFloatSpecials[u64() % 7]);
      else
        v = Value::of_f64(x * ((u64() & 1) ? 2.0 : 0.5) +
                          static_cast<double>(static_cast<int64_t>(u64() % 7) - 3));
      return;
    }
    case Tag::kStr: {
      std::string s = std::get<std::string>(v.data);
      switch (u64() % 4) {
        case 0: {  // insert
          size_t pos = s.empty() ? 0 : u64() % (s.size() + 1);
          s.insert(pos, 1, static_cast<char>(0x20 + (u64() % 95)));
          break;
        }
        case 1: {  // delete
          if (!s.empty()) s.erase(u64() % s.size(), 1);
          break;
        }
        case 2: {  // duplicate a chunk
          if (!s.empty()) {
            size_t pos = u64() % s.size();
            size_t len = 1 + u64() % std::min<size_t>(8, s.size() - pos);
            s.insert(pos, s.substr(pos, len));
          }
          break;
        }
        case 3: {  // splice in a token
          const char* tok = kStringTokens[u64() % 12];
          size_t pos = s.empty() ? 0 : u64() % (s.size() + 1);
          s.insert(pos, tok);
          break;
        }
      }
      if (s.size() > 4096) s.resize(4096);
      v = Value::of_str(std::move(s));
      return;
    }
    case Tag::kBlob: {
      Bytes b = std::get<Bytes>(v.data);
      if (b.empty()) {
        b.push_back(static_cast<uint8_t>(u64()));
      } else {
        size_t bit = u64() % (b.size() * 8);
        b[bit / 8] ^= static_cast<uint8_t>(0x80 >> (bit % 8));
      }
      v = Value::of_blob(std::move(b));
      return;
    }
    case Tag::kComposite: {
      ValueList elems = std::get<ValueList>(v.data);
      if (!elems.empty()) mutate(elems[u64() % elems.size()]);
      v = Value::of_composite(std::move(elems));
      return;
    }
  }
}

ValueList TypedGen::mutate_list(const ValueList& parent, int count) {
  ValueList out = parent;
  if (out.empty()) return out;
  for (int i = 0; i < count; ++i) mutate(out[u64() % out.size()]);
  return out;
}

}  // namespace anthill
