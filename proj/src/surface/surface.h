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
// Attack-surface mapping: the dual identity of every target API (high-level
// signature and low-level transaction id), obtainable two ways — statically
// from the service manifest and dynamically by querying a running target's
// service manager. The two paths are kept separate so their agreement is a
// meaningful cross-check.

#ifndef ANTHILL_SURFACE_SURFACE_H_
#define ANTHILL_SURFACE_SURFACE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sim/manifest.h"
#include "wire/value.h"

namespace anthill {

enum class ApiGroup { kPrimitive, kComplex };

struct ApiDescriptor {
  std::string service_name;
  std::string interface_name;
  std::string method_name;
  uint32_t txn_id = 0;  // unique per service, >= 1
  std::vector<ParamType> params;
  uint32_t block_count = 1;
  ApiGroup group = ApiGroup::kComplex;

  bool operator==(const ApiDescriptor&) const = default;

  std::string key() const {
    return service_name + ":" + std::to_string(txn_id);
  }
  std::string qualified_name() const {
    return service_name + "." + method_name;
  }
};

// Primitive iff every param is a directly encodable scalar (bool/int/float/
// str) and the list is non-empty.
ApiGroup classify_group(const std::vector<ParamType>& params);

struct Surface {
  std::string target_fingerprint;
  int64_t captured_at_us = 0;
  std::vector<ApiDescriptor> apis;  // sorted by (service_name, txn_id)

  const ApiDescriptor* find(const std::string& service, uint32_t txn) const;
  const ApiDescriptor* find_by_name(const std::string& service,
                                    const std::string& method) const;
};

// Equality as a set of descriptors plus fingerprint; captured_at is ignored.
bool surfaces_equal(const Surface& a, const Surface& b);

// Static mapping: parse the manifest file. Validation errors (duplicate txn
// ids etc.) surface from the manifest parser.
Surface map_static(const std::filesystem::path& manifest_path);
Surface surface_from_manifest(const Manifest& m);

// Dynamic mapping: enumerate a running target through its service manager.
// Throws Error(kRetryable) when the target is unreachable and
// Error(kProtocol) naming the service on a malformed describe reply.
Surface map_dynamic(const std::string& endpoint);

// Splits fuzzable APIs into the primitive and complex groups. APIs with an
// empty parameter list appear in neither.
struct Partition {
  std::vector<ApiDescriptor> primitive;
  std::vector<ApiDescriptor> complex_group;
};
Partition partition(const Surface& surface);

nlohmann::json surface_to_json(const Surface& s);
Surface surface_from_json(const nlohmann::json& j);
void write_surface(const std::filesystem::path& path, const Surface& s);
Surface load_surface(const std::filesystem::path& path);

}  // namespace anthill

#endif  // ANTHILL_SURFACE_SURFACE_H_
