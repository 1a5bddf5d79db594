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
// Service manifest: the single source of truth for a target build. The same
// file drives the simulator (services, permission checks, seeded faults) and
// the static half of surface mapping. Schema documented in docs/manifest.md.

#ifndef ANTHILL_SIM_MANIFEST_H_
#define ANTHILL_SIM_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "wire/value.h"

namespace anthill {

enum class PermPosition { kEntry, kDeep };

struct PermissionCheck {
  std::string name;
  PermPosition position = PermPosition::kEntry;
  uint32_t block = 0;  // deep checks fire when this block is reached
};

enum class FaultClass {
  kUncaughtException,
  kFreeze,
  kResourceExhaustion,
  kParseCrash,
  kCollateralCrash,
};

const char* fault_class_name(FaultClass c);
std::optional<FaultClass> fault_class_from_name(const std::string& s);

// Deterministic predicate over decoded arguments (and, for some kinds, the
// boot nonce of the instance). Kinds are intentionally low-entropy so
// black-box fuzzers reach them within CI budgets.
struct TriggerSpec {
  std::string kind;  // i32_mask_eq | i32_outside | blob_null | str_longer_than
                     // | boot_nonce_mod | always
  uint32_t arg = 0;
  int64_t mask = 0;
  int64_t value = 0;
  int64_t lo = 0;
  int64_t hi = 0;
  int64_t len = 0;
  int64_t mod = 0;
};

struct FaultSpec {
  FaultClass fault_class = FaultClass::kUncaughtException;
  TriggerSpec trigger;
  // Freeze only: a fired trigger leaves persistent poison behind, so each
  // soft-reboot freezes again during boot until the watchdog gives up and
  // declares a bootloop.
  bool poison = false;
  // ResourceExhaustion only: slot table size; 0 means use the target default.
  uint32_t limit = 0;
};

struct MethodSpec {
  std::string name;
  uint32_t txn_id = 0;
  std::vector<ParamType> params;
  uint32_t block_count = 1;
  std::string behavior = "echo_digest";
  nlohmann::json behavior_args = nlohmann::json::object();
  std::vector<PermissionCheck> permissions;  // entry checks run in list order
  std::optional<FaultSpec> fault;
  bool no_coverage_info = false;  // emits no edges and universe 0
};

struct ServiceSpec {
  std::string name;
  std::string interface_name;
  std::vector<MethodSpec> methods;
};

struct PrincipalSpec {
  uint32_t principal_id = 0;
  std::set<std::string> permissions;
};

struct WatchdogSpec {
  double window_s = 10.0;
  double tick_s = 1.0;
  uint32_t bootloop_threshold = 3;
  double bootloop_window_s = 120.0;
};

struct Manifest {
  std::string target_name;
  WatchdogSpec watchdog;
  uint32_t resource_limit = 1024;
  std::vector<ServiceSpec> services;
  std::vector<PrincipalSpec> principals;  // principal 0 is implicit and empty

  // Stable fingerprint of the semantic content; identical for byte-different
  // files that describe the same build.
  std::string fingerprint() const;

  const ServiceSpec* find_service(const std::string& name) const;
  const MethodSpec* find_method(const std::string& service, uint32_t txn) const;
  size_t api_count() const;

  // Ground-truth permission map straight from the manifest:
  // "service.method" -> all checked permissions (entry and deep).
  std::map<std::string, std::set<std::string>> ground_truth_permissions() const;
};

// Parses and validates. Throws Error(kValidation) with a message listing all
// duplicate (service, txn_id) pairs when uniqueness is violated.
Manifest parse_manifest(const nlohmann::json& doc);
Manifest load_manifest(const std::filesystem::path& path);

nlohmann::json manifest_to_json(const Manifest& m);

}  // namespace anthill

#endif  // ANTHILL_SIM_MANIFEST_H_
