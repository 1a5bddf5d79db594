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
// Byte-buffer to typed-value translation for the byte-level fuzzer: a total
// function so that every byte string is a valid input. Numerics consume
// fixed-width little-endian chunks (zero-extended when the buffer runs out),
// Bool consumes one byte (& 1), Str consumes a one-byte length then that
// many bytes sanitized into a printable charset. Only primitive-group
// descriptors are supported.

#ifndef ANTHILL_GEN_DECODE_H_
#define ANTHILL_GEN_DECODE_H_

#include <span>
#include <vector>

#include "wire/value.h"

namespace anthill {

// Printable-charset sanitizer: bytes in [0x20, 0x7E] pass through (so the
// mapping is idempotent), everything else maps into the same range.
char sanitize_byte(uint8_t b);

// Throws Error(kConfig) on a non-primitive parameter.
ValueList decode_bytes(std::span<const uint8_t> buf,
                       const std::vector<ParamType>& params);

// Generator-side byte layout of a typed vector; decode_bytes(encode(v)) == v
// for any v produced by decode_bytes.
Bytes encode_typed_bytes(const ValueList& values);

// Length of the all-zero minimal buffer for a descriptor (the byte fuzzer's
// queue seed).
size_t min_encoded_size(const std::vector<ParamType>& params);

}  // namespace anthill

#endif  // ANTHILL_GEN_DECODE_H_
