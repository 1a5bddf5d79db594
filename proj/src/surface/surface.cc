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

#include "surface/surface.h"

#include <algorithm>

#include "common/clock.h"
#include "common/error.h"
#include "common/fs.h"
#include "sim/client.h"
#include "sim/meta.h"

namespace anthill {

ApiGroup classify_group(const std::vector<ParamType>& params) {
  if (params.empty()) return ApiGroup::kComplex;
  for (const auto& p : params)
    if (!p.is_primitive()) return ApiGroup::kComplex;
  return ApiGroup::kPrimitive;
}

const ApiDescriptor* Surface::find(const std::string& service,
                                   uint32_t txn) const {
  for (const auto& a : apis)
    if (a.service_name == service && a.txn_id == txn) return &a;
  return nullptr;
}

const ApiDescriptor* Surface::find_by_name(const std::string& service,
                                           const std::string& method) const {
  for (const auto& a : apis)
    if (a.service_name == service && a.method_name == method) return &a;
  return nullptr;
}

namespace {

void sort_apis(std::vector<ApiDescriptor>& apis) {
  std::sort(apis.begin(), apis.end(),
            [](const ApiDescriptor& a, const ApiDescriptor& b) {
              if (a.service_name != b.service_name)
                return a.service_name < b.service_name;
              return a.txn_id < b.txn_id;
            });
}

}  // namespace

bool surfaces_equal(const Surface& a, const Surface& b) {
  if (a.target_fingerprint != b.target_fingerprint) return false;
  if (a.apis.size() != b.apis.size()) return false;
  auto sa = a.apis, sb = b.apis;
  sort_apis(sa);
  sort_apis(sb);
  return sa == sb;
}

Surface surface_from_manifest(const Manifest& m) {
  Surface s;
  s.target_fingerprint = m.fingerprint();
  s.captured_at_us = now_us();
  for (const auto& svc : m.services) {
    for (const auto& mm : svc.methods) {
      ApiDescriptor d;
      d.service_name = svc.name;
      d.interface_name = svc.interface_name;
      d.method_name = mm.name;
      d.txn_id = mm.txn_id;
      d.params = mm.params;
      d.block_count = mm.block_count;
      d.group = classify_group(mm.params);
      s.apis.push_back(std::move(d));
    }
  }
  sort_apis(s.apis);
  return s;
}

Surface map_static(const std::filesystem::path& manifest_path) {
  return surface_from_manifest(load_manifest(manifest_path));
}

Surface map_dynamic(const std::string& endpoint) {
  SimClient client(endpoint);
  auto listed = client.list_services(2000);
  if (!listed)
    throw Error(ErrorKind::kRetryable,
                "target not reachable at " + endpoint);
  Surface s;
  s.captured_at_us = now_us();
  try {
    s.target_fingerprint = listed->at("fingerprint").get<std::string>();
    for (const auto& name_j : listed->at("services")) {
      std::string name = name_j.get<std::string>();
      auto desc = client.describe_service(name, 2000);
      if (!desc)
        throw Error(ErrorKind::kProtocol,
                    "describe failed for service '" + name + "'");
      std::string iface = desc->value("interface", "");
      for (const auto& mj : desc->at("methods")) {
        ApiDescriptor d;
        d.service_name = name;
        d.interface_name = iface;
        if (!mj.contains("name") || !mj.contains("txn_id"))
          throw Error(ErrorKind::kProtocol,
                      "describe reply for service '" + name +
                          "' is missing method identity fields");
        d.method_name = mj["name"].get<std::string>();
        int64_t txn = mj["txn_id"].get<int64_t>();
        if (txn < 1)
          throw Error(ErrorKind::kProtocol,
                      "describe reply for service '" + name +
                          "' carries invalid txn_id for method " +
                          d.method_name);
        d.txn_id = static_cast<uint32_t>(txn);
        d.params = param_list_from_json(mj.value("params", nlohmann::json::array()));
        d.block_count = mj.value("block_count", 1u);
        d.group = classify_group(d.params);
        s.apis.push_back(std::move(d));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kProtocol,
                std::string("malformed service manager reply: ") + e.what());
  }
  sort_apis(s.apis);
  return s;
}

Partition partition(const Surface& surface) {
  Partition p;
  for (const auto& a : surface.apis) {
    if (a.params.empty()) continue;
    if (a.group == ApiGroup::kPrimitive)
      p.primitive.push_back(a);
    else
      p.complex_group.push_back(a);
  }
  return p;
}

nlohmann::json surface_to_json(const Surface& s) {
  nlohmann::json j;
  j["target_fingerprint"] = s.target_fingerprint;
  j["captured_at_us"] = s.captured_at_us;
  auto arr = nlohmann::json::array();
  auto sorted = s.apis;
  sort_apis(sorted);
  for (const auto& a : sorted) {
    nlohmann::json aj;
    aj["service_name"] = a.service_name;
    aj["interface_name"] = a.interface_name;
    aj["method_name"] = a.method_name;
    aj["txn_id"] = a.txn_id;
    aj["params"] = param_list_to_strings(a.params);
    aj["block_count"] = a.block_count;
    aj["group"] = a.group == ApiGroup::kPrimitive ? "primitive" : "complex";
    arr.push_back(aj);
  }
  j["apis"] = arr;
  return j;
}

Surface surface_from_json(const nlohmann::json& j) {
  Surface s;
  s.target_fingerprint = j.value("target_fingerprint", "");
  s.captured_at_us = j.value("captured_at_us", int64_t{0});
  for (const auto& aj : j.value("apis", nlohmann::json::array())) {
    ApiDescriptor d;
    d.service_name = aj.at("service_name").get<std::string>();
    d.interface_name = aj.value("interface_name", "");
    d.method_name = aj.at("method_name").get<std::string>();
    d.txn_id = aj.at("txn_id").get<uint32_t>();
    d.params = param_list_from_json(aj.value("params", nlohmann::json::array()));
    d.block_count = aj.value("block_count", 1u);
    d.group = classify_group(d.params);
    s.apis.push_back(std::move(d));
  }
  sort_apis(s.apis);
  return s;
}

void write_surface(const std::filesystem::path& path, const Surface& s) {
  write_json_file(path, surface_to_json(s));
}

Surface load_surface(const std::filesystem::path& path) {
  return surface_from_json(read_json_file(path));
}

}  // namespace anthill
