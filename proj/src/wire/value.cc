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

#include "wire/value.h"

#include <cmath>

#include "common/error.h"
#include "common/hash.h"

namespace anthill {

const char* tag_name(Tag t) {
  switch (t) {
    case Tag::kBool: return "bool";
    case Tag::kI32: return "i32";
    case Tag::kI64: return "i64";
    case Tag::kF32: return "f32";
    case Tag::kF64: return "f64";
    case Tag::kStr: return "str";
    case Tag::kBlob: return "blob";
    case Tag::kComposite: return "composite";
  }
  return "?";
}

std::string ParamType::to_string() const {
  if (tag != Tag::kComposite) return tag_name(tag);
  std::string out = "composite(";
  for (size_t i = 0; i < elems.size(); ++i) {
    if (i) out += ",";
    out += elems[i].to_string();
  }
  out += ")";
  return out;
}

ParamType ParamType::parse(const std::string& text) {
  auto scalar = [](const std::string& s) -> std::optional<Tag> {
    if (s == "bool") return Tag::kBool;
    if (s == "i32") return Tag::kI32;
    if (s == "i64") return Tag::kI64;
    if (s == "f32") return Tag::kF32;
    if (s == "f64") return Tag::kF64;
    if (s == "str") return Tag::kStr;
    if (s == "blob") return Tag::kBlob;
    return std::nullopt;
  };
  if (auto t = scalar(text)) return ParamType{*t, {}};
  const std::string prefix = "composite(";
  if (text.rfind(prefix, 0) == 0 && text.back() == ')') {
    std::string inner = text.substr(prefix.size(),
                                    text.size() - prefix.size() - 1);
    ParamType out{Tag::kComposite, {}};
    std::string cur;
    for (char c : inner) {
      if (c == ',') {
        if (auto t = scalar(cur))
          out.elems.push_back(ParamType{*t, {}});
        else
          throw Error(ErrorKind::kValidation,
                      "composite element must be scalar, got '" + cur + "'");
        cur.clear();
      } else if (c != ' ') {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) {
      if (auto t = scalar(cur))
        out.elems.push_back(ParamType{*t, {}});
      else
        throw Error(ErrorKind::kValidation,
                    "composite element must be scalar, got '" + cur + "'");
    }
    if (out.elems.empty())
      throw Error(ErrorKind::kValidation, "composite() needs elements");
    return out;
  }
  throw Error(ErrorKind::kValidation, "unknown param type '" + text + "'");
}

std::vector<std::string> param_list_to_strings(const std::vector<ParamType>& params) {
  std::vector<std::string> out;
  out.reserve(params.size());
  for (const auto& p : params) out.push_back(p.to_string());
  return out;
}

std::vector<ParamType> param_list_from_json(const nlohmann::json& arr) {
  std::vector<ParamType> out;
  for (const auto& e : arr) out.push_back(ParamType::parse(e.get<std::string>()));
  return out;
}

int64_t Value::as_i64() const {
  switch (tag) {
    case Tag::kBool: return std::get<bool>(data) ? 1 : 0;
    case Tag::kI32: return std::get<int32_t>(data);
    case Tag::kI64: return std::get<int64_t>(data);
    case Tag::kF32: {
      float f = std::get<float>(data);
      return std::isfinite(f) ? static_cast<int64_t>(f) : 0;
    }
    case Tag::kF64: {
      double d = std::get<double>(data);
      return std::isfinite(d) ? static_cast<int64_t>(d) : 0;
    }
    case Tag::kStr: return static_cast<int64_t>(std::get<std::string>(data).size());
    case Tag::kBlob: return static_cast<int64_t>(std::get<Bytes>(data).size());
    case Tag::kComposite: return static_cast<int64_t>(std::get<ValueList>(data).size());
  }
  return 0;
}

Bytes Value::body_bytes() const {
  ByteWriter w;
  switch (tag) {
    case Tag::kBool: w.u8(std::get<bool>(data) ? 1 : 0); break;
    case Tag::kI32: w.i32(std::get<int32_t>(data)); break;
    case Tag::kI64: w.i64(std::get<int64_t>(data)); break;
    case Tag::kF32: w.f32(std::get<float>(data)); break;
    case Tag::kF64: w.f64(std::get<double>(data)); break;
    case Tag::kStr: w.str(std::get<std::string>(data)); break;
    case Tag::kBlob: w.bytes(std::get<Bytes>(data)); break;
    case Tag::kComposite:
      for (const auto& e : std::get<ValueList>(data)) {
        Bytes b = e.body_bytes();
        w.bytes(b);
      }
      break;
  }
  return w.take();
}

nlohmann::json Value::to_json() const {
  nlohmann::json j;
  j["t"] = tag_name(tag);
  switch (tag) {
    case Tag::kBool: j["v"] = std::get<bool>(data); break;
    case Tag::kI32: j["v"] = std::get<int32_t>(data); break;
    case Tag::kI64: j["v"] = std::get<int64_t>(data); break;
    case Tag::kF32: {
      uint32_t bits;
      float f = std::get<float>(data);
      static_assert(sizeof(bits) == sizeof(f));
      std::memcpy(&bits, &f, 4);
      j["bits"] = bits;  // bit-exact; NaN survives serialization
      break;
    }
    case Tag::kF64: {
      uint64_t bits;
      double d = std::get<double>(data);
      std::memcpy(&bits, &d, 8);
      j["bits"] = bits;
      break;
    }
    case Tag::kStr: j["hex"] = to_hex(Bytes(std::get<std::string>(data).begin(),
                                            std::get<std::string>(data).end()));
      break;
    case Tag::kBlob: j["hex"] = to_hex(std::get<Bytes>(data)); break;
    case Tag::kComposite: {
      auto arr = nlohmann::json::array();
      for (const auto& e : std::get<ValueList>(data)) arr.push_back(e.to_json());
      j["v"] = arr;
      break;
    }
  }
  return j;
}

std::optional<Value> Value::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("t")) return std::nullopt;
  std::string t = j["t"].get<std::string>();
  try {
    if (t == "bool") return Value::of_bool(j.at("v").get<bool>());
    if (t == "i32") return Value::of_i32(j.at("v").get<int32_t>());
    if (t == "i64") return Value::of_i64(j.at("v").get<int64_t>());
    if (t == "f32") {
      uint32_t bits = j.at("bits").get<uint32_t>();
      float f;
      std::memcpy(&f, &bits, 4);
      return Value::of_f32(f);
    }
    if (t == "f64") {
      uint64_t bits = j.at("bits").get<uint64_t>();
      double d;
      std::memcpy(&d, &bits, 8);
      return Value::of_f64(d);
    }
    if (t == "str") {
      Bytes b;
      if (!from_hex(j.at("hex").get<std::string>(), b)) return std::nullopt;
      return Value::of_str(std::string(b.begin(), b.end()));
    }
    if (t == "blob") {
      Bytes b;
      if (!from_hex(j.at("hex").get<std::string>(), b)) return std::nullopt;
      return Value::of_blob(std::move(b));
    }
    if (t == "composite") {
      ValueList elems;
      for (const auto& e : j.at("v")) {
        auto v = from_json(e);
        if (!v) return std::nullopt;
        elems.push_back(std::move(*v));
      }
      return Value::of_composite(std::move(elems));
    }
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
  return std::nullopt;
}

void encode_values(const ValueList& values, ByteWriter& w) {
  for (const auto& v : values) {
    w.u8(static_cast<uint8_t>(v.tag));
    switch (v.tag) {
      case Tag::kBool:
      case Tag::kI32:
      case Tag::kI64:
      case Tag::kF32:
      case Tag::kF64: {
        Bytes b = v.body_bytes();
        w.bytes(b);
        break;
      }
      case Tag::kStr: {
        const auto& s = std::get<std::string>(v.data);
        w.u32(static_cast<uint32_t>(s.size()));
        w.str(s);
        break;
      }
      case Tag::kBlob: {
        const auto& b = std::get<Bytes>(v.data);
        w.u32(static_cast<uint32_t>(b.size()));
        w.bytes(b);
        break;
      }
      case Tag::kComposite: {
        const auto& elems = std::get<ValueList>(v.data);
        w.u32(static_cast<uint32_t>(elems.size()));
        encode_values(elems, w);
        break;
      }
    }
  }
}

Bytes encode_values(const ValueList& values) {
  ByteWriter w;
  encode_values(values, w);
  return w.take();
}

namespace {

bool decode_one(ByteReader& r, const ParamType& want, Value& out,
                std::string& err) {
  uint8_t raw_tag = 0;
  if (!r.u8(raw_tag)) {
    err = "truncated before " + want.to_string();
    return false;
  }
  if (raw_tag != static_cast<uint8_t>(want.tag)) {
    err = "expected " + want.to_string() + ", got tag " +
          std::to_string(raw_tag);
    return false;
  }
  switch (want.tag) {
    case Tag::kBool: {
      uint8_t b;
      if (!r.u8(b)) { err = "truncated bool"; return false; }
      out = Value::of_bool(b != 0);
      return true;
    }
    case Tag::kI32: {
      int32_t v;
      if (!r.i32(v)) { err = "truncated i32"; return false; }
      out = Value::of_i32(v);
      return true;
    }
    case Tag::kI64: {
      int64_t v;
      if (!r.i64(v)) { err = "truncated i64"; return false; }
      out = Value::of_i64(v);
      return true;
    }
    case Tag::kF32: {
      float v;
      if (!r.f32(v)) { err = "truncated f32"; return false; }
      out = Value::of_f32(v);
      return true;
    }
    case Tag::kF64: {
      double v;
      if (!r.f64(v)) { err = "truncated f64"; return false; }
      out = Value::of_f64(v);
      return true;
    }
    case Tag::kStr: {
      uint32_t len;
      if (!r.u32(len)) { err = "truncated str length"; return false; }
      std::string s;
      if (!r.str(len, s)) { err = "truncated str body"; return false; }
      out = Value::of_str(std::move(s));
      return true;
    }
    case Tag::kBlob: {
      uint32_t len;
      if (!r.u32(len)) { err = "truncated blob length"; return false; }
      Bytes b;
      if (!r.bytes(len, b)) { err = "truncated blob body"; return false; }
      out = Value::of_blob(std::move(b));
      return true;
    }
    case Tag::kComposite: {
      uint32_t count;
      if (!r.u32(count)) { err = "truncated composite count"; return false; }
      if (count != want.elems.size()) {
        err = "composite arity mismatch";
        return false;
      }
      ValueList elems;
      elems.reserve(count);
      for (uint32_t i = 0; i < count; ++i) {
        Value e;
        if (!decode_one(r, want.elems[i], e, err)) return false;
        elems.push_back(std::move(e));
      }
      out = Value::of_composite(std::move(elems));
      return true;
    }
  }
  err = "unreachable";
  return false;
}

}  // namespace

DecodeResult decode_values(std::span<const uint8_t> payload,
                           const std::vector<ParamType>& params) {
  DecodeResult res;
  ByteReader r(payload);
  res.values.reserve(params.size());
  for (const auto& p : params) {
    Value v;
    std::string err;
    if (!decode_one(r, p, v, err)) {
      res.ok = false;
      res.error = err;
      return res;
    }
    res.values.push_back(std::move(v));
  }
  res.ok = true;
  return res;
}

uint64_t values_digest(const ValueList& values) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& v : values) {
    uint8_t t = static_cast<uint8_t>(v.tag);
    h = fnv1a64(&t, 1, h);
    Bytes b = v.body_bytes();
    uint32_t n = static_cast<uint32_t>(b.size());
    h = fnv1a64(&n, 4, h);
    h = fnv1a64(b.data(), b.size(), h);
  }
  return h;
}

}  // namespace anthill
