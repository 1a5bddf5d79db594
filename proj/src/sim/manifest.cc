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

#include "sim/manifest.h"

#include <algorithm>

#include "common/error.h"
#include "common/fs.h"
#include "common/hash.h"

namespace anthill {

const char* fault_class_name(FaultClass c) {
  switch (c) {
    case FaultClass::kUncaughtException: return "uncaught_exception";
    case FaultClass::kFreeze: return "freeze";
    case FaultClass::kResourceExhaustion: return "resource_exhaustion";
    case FaultClass::kParseCrash: return "parse_crash";
    case FaultClass::kCollateralCrash: return "collateral_crash";
  }
  return "?";
}

std::optional<FaultClass> fault_class_from_name(const std::string& s) {
  if (s == "uncaught_exception") return FaultClass::kUncaughtException;
  if (s == "freeze") return FaultClass::kFreeze;
  if (s == "resource_exhaustion") return FaultClass::kResourceExhaustion;
  if (s == "parse_crash") return FaultClass::kParseCrash;
  if (s == "collateral_crash") return FaultClass::kCollateralCrash;
  return std::nullopt;
}

namespace {

TriggerSpec parse_trigger(const nlohmann::json& j) {
  TriggerSpec t;
  t.kind = j.at("kind").get<std::string>();
  if (j.contains("arg")) t.arg = j["arg"].get<uint32_t>();
  if (j.contains("mask")) t.mask = j["mask"].get<int64_t>();
  if (j.contains("value")) t.value = j["value"].get<int64_t>();
  if (j.contains("lo")) t.lo = j["lo"].get<int64_t>();
  if (j.contains("hi")) t.hi = j["hi"].get<int64_t>();
  if (j.contains("len")) t.len = j["len"].get<int64_t>();
  if (j.contains("mod")) t.mod = j["mod"].get<int64_t>();
  static const std::set<std::string> kKnown = {
      "i32_mask_eq", "i32_outside", "blob_null",
      "str_longer_than", "boot_nonce_mod", "always"};
  if (!kKnown.count(t.kind))
    throw Error(ErrorKind::kValidation, "unknown trigger kind '" + t.kind + "'");
  return t;
}

nlohmann::json trigger_to_json(const TriggerSpec& t) {
  nlohmann::json j;
  j["kind"] = t.kind;
  if (t.kind == "i32_mask_eq") { j["arg"] = t.arg; j["mask"] = t.mask; j["value"] = t.value; }
  if (t.kind == "i32_outside") { j["arg"] = t.arg; j["lo"] = t.lo; j["hi"] = t.hi; }
  if (t.kind == "blob_null") { j["arg"] = t.arg; }
  if (t.kind == "str_longer_than") { j["arg"] = t.arg; j["len"] = t.len; }
  if (t.kind == "boot_nonce_mod") { j["mod"] = t.mod; j["value"] = t.value; }
  return j;
}

MethodSpec parse_method(const std::string& service, const nlohmann::json& j) {
  MethodSpec m;
  m.name = j.at("name").get<std::string>();
  if (m.name.empty())
    throw Error(ErrorKind::kValidation, "empty method name in " + service);
  if (!j.contains("txn_id"))
    throw Error(ErrorKind::kValidation,
                "method " + service + "." + m.name + " missing txn_id");
  int64_t txn = j["txn_id"].get<int64_t>();
  if (txn < 1)
    throw Error(ErrorKind::kValidation,
                "txn_id must be >= 1 for " + service + "." + m.name);
  m.txn_id = static_cast<uint32_t>(txn);
  if (j.contains("params")) m.params = param_list_from_json(j["params"]);
  for (const auto& p : m.params) {
    for (const auto& e : p.elems) {
      if (e.tag == Tag::kComposite)
        throw Error(ErrorKind::kValidation,
                    "composite params nest at most one level (" + service +
                        "." + m.name + ")");
    }
  }
  m.block_count = j.value("block_count", 1u);
  if (m.block_count < 1)
    throw Error(ErrorKind::kValidation,
                "block_count must be >= 1 for " + service + "." + m.name);
  m.behavior = j.value("behavior", std::string("echo_digest"));
  if (j.contains("behavior_args")) m.behavior_args = j["behavior_args"];
  m.no_coverage_info = j.value("no_coverage_info", false);
  if (j.contains("permissions")) {
    for (const auto& pj : j["permissions"]) {
      PermissionCheck pc;
      pc.name = pj.at("name").get<std::string>();
      std::string pos = pj.value("position", std::string("entry"));
      if (pos == "entry") {
        pc.position = PermPosition::kEntry;
      } else if (pos == "deep") {
        pc.position = PermPosition::kDeep;
        pc.block = pj.value("block", 2u);
        if (pc.block < 1 || pc.block > m.block_count)
          throw Error(ErrorKind::kValidation,
                      "deep check block out of range for " + service + "." +
                          m.name);
      } else {
        throw Error(ErrorKind::kValidation,
                    "permission position must be entry|deep, got '" + pos + "'");
      }
      m.permissions.push_back(std::move(pc));
    }
  }
  if (j.contains("fault") && !j["fault"].is_null()) {
    const auto& fj = j["fault"];
    FaultSpec f;
    auto cls = fault_class_from_name(fj.at("class").get<std::string>());
    if (!cls)
      throw Error(ErrorKind::kValidation,
                  "unknown fault class in " + service + "." + m.name);
    f.fault_class = *cls;
    f.trigger = parse_trigger(fj.at("trigger"));
    f.poison = fj.value("poison", false);
    f.limit = fj.value("limit", 0u);
    m.fault = std::move(f);
  }
  return m;
}

}  // namespace

Manifest parse_manifest(const nlohmann::json& doc) {
  Manifest m;
  m.target_name = doc.value("target", std::string("target"));
  if (doc.contains("watchdog")) {
    const auto& w = doc["watchdog"];
    m.watchdog.window_s = w.value("window_s", 10.0);
    m.watchdog.tick_s = w.value("tick_s", 1.0);
    m.watchdog.bootloop_threshold = w.value("bootloop_threshold", 3u);
    m.watchdog.bootloop_window_s = w.value("bootloop_window_s", 120.0);
  }
  m.resource_limit = doc.value("resource_limit", 1024u);

  for (const auto& sj : doc.value("services", nlohmann::json::array())) {
    ServiceSpec s;
    s.name = sj.at("name").get<std::string>();
    if (s.name.empty())
      throw Error(ErrorKind::kValidation, "empty service name");
    if (s.name.rfind("sys.", 0) == 0)
      throw Error(ErrorKind::kValidation,
                  "service names starting with 'sys.' are reserved: " + s.name);
    s.interface_name = sj.value("interface", "com.sim." + s.name);
    for (const auto& mj : sj.value("methods", nlohmann::json::array()))
      s.methods.push_back(parse_method(s.name, mj));
    m.services.push_back(std::move(s));
  }

  for (const auto& pj : doc.value("principals", nlohmann::json::array())) {
    PrincipalSpec p;
    p.principal_id = pj.at("principal_id").get<uint32_t>();
    for (const auto& perm : pj.value("permissions", nlohmann::json::array()))
      p.permissions.insert(perm.get<std::string>());
    m.principals.push_back(std::move(p));
  }

  // Uniqueness: (service, txn_id) and (service, method, arity).
  std::vector<std::string> dup_txn;
  std::vector<std::string> dup_sig;
  std::set<std::string> service_names;
  for (const auto& s : m.services) {
    if (!service_names.insert(s.name).second)
      throw Error(ErrorKind::kValidation, "duplicate service '" + s.name + "'");
    std::set<uint32_t> txns;
    std::set<std::pair<std::string, size_t>> sigs;
    for (const auto& mm : s.methods) {
      if (!txns.insert(mm.txn_id).second)
        dup_txn.push_back(s.name + ":" + std::to_string(mm.txn_id));
      if (!sigs.insert({mm.name, mm.params.size()}).second)
        dup_sig.push_back(s.name + "." + mm.name + "/" +
                          std::to_string(mm.params.size()));
    }
  }
  if (!dup_txn.empty() || !dup_sig.empty()) {
    std::string msg = "manifest uniqueness violation;";
    if (!dup_txn.empty()) {
      msg += " duplicate txn_ids: ";
      for (size_t i = 0; i < dup_txn.size(); ++i)
        msg += (i ? ", " : "") + dup_txn[i];
    }
    if (!dup_sig.empty()) {
      msg += " duplicate signatures: ";
      for (size_t i = 0; i < dup_sig.size(); ++i)
        msg += (i ? ", " : "") + dup_sig[i];
    }
    throw Error(ErrorKind::kValidation, msg);
  }
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_json_file(path));
}

nlohmann::json manifest_to_json(const Manifest& m) {
  nlohmann::json doc;
  doc["target"] = m.target_name;
  doc["watchdog"] = {{"window_s", m.watchdog.window_s},
                     {"tick_s", m.watchdog.tick_s},
                     {"bootloop_threshold", m.watchdog.bootloop_threshold},
                     {"bootloop_window_s", m.watchdog.bootloop_window_s}};
  doc["resource_limit"] = m.resource_limit;
  auto services = nlohmann::json::array();
  for (const auto& s : m.services) {
    nlohmann::json sj;
    sj["name"] = s.name;
    sj["interface"] = s.interface_name;
    auto methods = nlohmann::json::array();
    for (const auto& mm : s.methods) {
      nlohmann::json mj;
      mj["name"] = mm.name;
      mj["txn_id"] = mm.txn_id;
      mj["params"] = param_list_to_strings(mm.params);
      mj["block_count"] = mm.block_count;
      mj["behavior"] = mm.behavior;
      if (!mm.behavior_args.empty()) mj["behavior_args"] = mm.behavior_args;
      if (mm.no_coverage_info) mj["no_coverage_info"] = true;
      if (!mm.permissions.empty()) {
        auto perms = nlohmann::json::array();
        for (const auto& pc : mm.permissions) {
          nlohmann::json pj;
          pj["name"] = pc.name;
          pj["position"] = pc.position == PermPosition::kEntry ? "entry" : "deep";
          if (pc.position == PermPosition::kDeep) pj["block"] = pc.block;
          perms.push_back(pj);
        }
        mj["permissions"] = perms;
      }
      if (mm.fault) {
        nlohmann::json fj;
        fj["class"] = fault_class_name(mm.fault->fault_class);
        fj["trigger"] = trigger_to_json(mm.fault->trigger);
        if (mm.fault->poison) fj["poison"] = true;
        if (mm.fault->limit) fj["limit"] = mm.fault->limit;
        mj["fault"] = fj;
      }
      methods.push_back(mj);
    }
    sj["methods"] = methods;
    services.push_back(sj);
  }
  doc["services"] = services;
  if (!m.principals.empty()) {
    auto principals = nlohmann::json::array();
    for (const auto& p : m.principals) {
      nlohmann::json pj;
      pj["principal_id"] = p.principal_id;
      pj["permissions"] = p.permissions;
      principals.push_back(pj);
    }
    doc["principals"] = principals;
  }
  return doc;
}

std::string Manifest::fingerprint() const {
  // nlohmann keeps object keys sorted, so the dump is canonical.
  return hex64(fnv1a64(manifest_to_json(*this).dump()));
}

const ServiceSpec* Manifest::find_service(const std::string& name) const {
  for (const auto& s : services)
    if (s.name == name) return &s;
  return nullptr;
}

const MethodSpec* Manifest::find_method(const std::string& service,
                                        uint32_t txn) const {
  const auto* s = find_service(service);
  if (!s) return nullptr;
  for (const auto& m : s->methods)
    if (m.txn_id == txn) return &m;
  return nullptr;
}

size_t Manifest::api_count() const {
  size_t n = 0;
  for (const auto& s : services) n += s.methods.size();
  return n;
}

std::map<std::string, std::set<std::string>> Manifest::ground_truth_permissions()
    const {
  std::map<std::string, std::set<std::string>> out;
  for (const auto& s : services) {
    for (const auto& m : s.methods) {
      auto& perms = out[s.name + "." + m.name];
      for (const auto& pc : m.permissions) perms.insert(pc.name);
    }
  }
  return out;
}

}  // namespace anthill
