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

#ifndef ANTHILL_WIRE_VALUE_H_
#define ANTHILL_WIRE_VALUE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "common/bytes.h"

namespace anthill {

// Parameter type tags as they appear on the wire. Composite nests at most
// one level: a composite's elements are all scalar.
enum class Tag : uint8_t {
  kBool = 1,
  kI32 = 2,
  kI64 = 3,
  kF32 = 4,
  kF64 = 5,
  kStr = 6,
  kBlob = 7,
  kComposite = 8,
};

const char* tag_name(Tag t);

struct ParamType {
  Tag tag = Tag::kI32;
  std::vector<ParamType> elems;  // only for kComposite

  bool operator==(const ParamType&) const = default;

  // True for Bool/I32/I64/F32/F64/Str — the set the byte-level fuzzers can
  // encode directly. Blob and Composite make an API "complex".
  bool is_primitive() const {
    return tag != Tag::kBlob && tag != Tag::kComposite;
  }

  // Textual form used in manifests and surface exports: "i32", "str",
  // "composite(i32,str)".
  std::string to_string() const;
  static ParamType parse(const std::string& text);  // throws Error(kValidation)
};

std::vector<std::string> param_list_to_strings(const std::vector<ParamType>& params);
std::vector<ParamType> param_list_from_json(const nlohmann::json& arr);

struct Value;
using ValueList = std::vector<Value>;

struct Value {
  Tag tag = Tag::kI32;
  std::variant<bool, int32_t, int64_t, float, double, std::string, Bytes,
               ValueList>
      data;

  static Value of_bool(bool v) { return {Tag::kBool, v}; }
  static Value of_i32(int32_t v) { return {Tag::kI32, v}; }
  static Value of_i64(int64_t v) { return {Tag::kI64, v}; }
  static Value of_f32(float v) { return {Tag::kF32, v}; }
  static Value of_f64(double v) { return {Tag::kF64, v}; }
  static Value of_str(std::string v) { return {Tag::kStr, std::move(v)}; }
  static Value of_blob(Bytes v) { return {Tag::kBlob, std::move(v)}; }
  static Value of_composite(ValueList v) { return {Tag::kComposite, std::move(v)}; }

  bool operator==(const Value&) const = default;

  // Widened integral view: Bool→0/1, I32/I64→value, F32/F64→truncated,
  // Str/Blob→length, Composite→element count. Used by fault triggers and
  // branchy behaviors that key on "the value" of an argument.
  int64_t as_i64() const;

  // Raw little-endian bytes of the value body (no tag), as carried in TLV.
  Bytes body_bytes() const;

  nlohmann::json to_json() const;
  static std::optional<Value> from_json(const nlohmann::json& j);
};

// TLV encoding of a value sequence: per value a tag byte, then the body
// (fixed width for numerics, Bool one byte, u32 length + bytes for Str/Blob,
// u32 element count + nested TLVs for Composite).
void encode_values(const ValueList& values, ByteWriter& w);
Bytes encode_values(const ValueList& values);

// Strict typed decode against a parameter list. Tag mismatch or truncation
// yields an error message ("BadParcel" surface). Bytes after the last
// parameter are ignored, mirroring parcel readers that stop at the last
// consumed field.
struct DecodeResult {
  bool ok = false;
  ValueList values;
  std::string error;  // set when !ok
};
DecodeResult decode_values(std::span<const uint8_t> payload,
                           const std::vector<ParamType>& params);

// Canonical digest of a value list; stable across runs. Behavior bodies echo
// this back so tests can check payload integrity end to end.
uint64_t values_digest(const ValueList& values);

}  // namespace anthill

#endif  // ANTHILL_WIRE_VALUE_H_
