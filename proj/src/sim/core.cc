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

#include "sim/core.h"

#include <algorithm>

#include "common/clock.h"
#include "common/error.h"
#include "common/hash.h"
#include "coverage/coverage.h"
#include "sim/meta.h"
#include "surface/surface.h"

namespace anthill {

namespace {

// Behavior bodies walk a small block graph, reporting each executed block
// through `emit`. emit returns false when a deep permission check denied at
// that block; the body must stop immediately.
struct BodyCtx {
  const MethodSpec* method = nullptr;
  const ValueList* args = nullptr;
  ServiceState* svc_state = nullptr;
  std::function<bool(uint32_t)> emit;
  Bytes reply;
};

Bytes digest_payload(const ValueList& args) {
  ByteWriter w;
  w.u64(values_digest(args));
  return w.take();
}

bool behavior_echo_digest(BodyCtx& ctx) {
  for (uint32_t b = 1; b <= ctx.method->block_count; ++b)
    if (!ctx.emit(b)) return false;
  ctx.reply = digest_payload(*ctx.args);
  return true;
}

bool behavior_branch4(BodyCtx& ctx) {
  if (!ctx.emit(1)) return false;
  uint32_t sel = 0;
  if (!ctx.args->empty())
    sel = static_cast<uint32_t>((*ctx.args)[0].as_i64() & 3);
  if (!ctx.emit(2 + sel)) return false;
  if (!ctx.emit(6)) return false;
  if (!ctx.emit(7)) return false;
  ctx.reply = digest_payload(*ctx.args);
  return true;
}

std::string first_text_arg(const ValueList& args) {
  for (const auto& v : args) {
    if (v.tag == Tag::kStr) return std::get<std::string>(v.data);
    if (v.tag == Tag::kBlob) {
      const auto& b = std::get<Bytes>(v.data);
      return std::string(b.begin(), b.end());
    }
  }
  return "";
}

bool behavior_prefix_gate(BodyCtx& ctx) {
  std::string gate = ctx.method->behavior_args.value("gate", std::string("MF"));
  if (!ctx.emit(1)) return false;
  std::string s = first_text_arg(*ctx.args);
  if (!gate.empty() && s.size() >= 1 && s[0] == gate[0]) {
    if (!ctx.emit(2)) return false;
    if (gate.size() >= 2 && s.size() >= 2 && s[1] == gate[1]) {
      if (!ctx.emit(3)) return false;
    }
  }
  if (!ctx.emit(4)) return false;
  ctx.reply = digest_payload(*ctx.args);
  return true;
}

bool behavior_value_gate(BodyCtx& ctx) {
  int64_t gate = ctx.method->behavior_args.value("value", int64_t{42});
  if (!ctx.emit(1)) return false;
  if (!ctx.args->empty() && (*ctx.args)[0].as_i64() == gate) {
    if (!ctx.emit(2)) return false;
  }
  if (!ctx.emit(3)) return false;
  ctx.reply = digest_payload(*ctx.args);
  return true;
}

bool behavior_kv_put(BodyCtx& ctx) {
  if (!ctx.emit(1)) return false;
  if (!ctx.emit(2)) return false;
  std::string key =
      ctx.args->empty() ? "nil" : hex64((*ctx.args)[0].as_i64());
  ctx.svc_state->kv[key] = hex64(values_digest(*ctx.args));
  if (!ctx.emit(3)) return false;
  ctx.reply = digest_payload(*ctx.args);
  return true;
}

bool behavior_kv_get(BodyCtx& ctx) {
  if (!ctx.emit(1)) return false;
  std::string key =
      ctx.args->empty() ? "nil" : hex64((*ctx.args)[0].as_i64());
  auto it = ctx.svc_state->kv.find(key);
  if (!ctx.emit(2)) return false;
  ByteWriter w;
  w.u64(it == ctx.svc_state->kv.end() ? 0 : fnv1a64(it->second));
  ctx.reply = w.take();
  if (!ctx.emit(3)) return false;
  return true;
}

bool behavior_counter_add(BodyCtx& ctx) {
  if (!ctx.emit(1)) return false;
  ctx.svc_state->counter += ctx.args->empty() ? 1 : (*ctx.args)[0].as_i64();
  if (!ctx.emit(2)) return false;
  ByteWriter w;
  w.i64(ctx.svc_state->counter);
  ctx.reply = w.take();
  return true;
}

bool behavior_noop(BodyCtx& ctx) {
  return ctx.emit(1);
}

struct BehaviorEntry {
  uint32_t min_blocks;
  bool (*fn)(BodyCtx&);
};

const std::map<std::string, BehaviorEntry>& behavior_registry() {
  static const std::map<std::string, BehaviorEntry> kRegistry = {
      {"echo_digest", {1, behavior_echo_digest}},
      {"branch4", {7, behavior_branch4}},
      {"prefix_gate", {4, behavior_prefix_gate}},
      {"value_gate", {3, behavior_value_gate}},
      {"kv_put", {3, behavior_kv_put}},
      {"kv_get", {3, behavior_kv_get}},
      {"counter_add", {2, behavior_counter_add}},
      {"noop", {1, behavior_noop}},
  };
  return kRegistry;
}

}  // namespace

SimCore::SimCore(Manifest manifest, LogSink* log, Options options)
    : manifest_(std::move(manifest)), log_(log), options_(options) {
  resource_limit_ = manifest_.resource_limit;
  for (const auto& s : manifest_.services) {
    for (const auto& m : s.methods) {
      auto it = behavior_registry().find(m.behavior);
      if (it == behavior_registry().end())
        throw Error(ErrorKind::kValidation,
                    "unknown behavior '" + m.behavior + "' in " + s.name +
                        "." + m.name);
      if (m.block_count < it->second.min_blocks)
        throw Error(ErrorKind::kValidation,
                    "behavior '" + m.behavior + "' needs block_count >= " +
                        std::to_string(it->second.min_blocks) + " (" + s.name +
                        "." + m.name + ")");
      if (m.fault && m.fault->fault_class == FaultClass::kResourceExhaustion &&
          m.fault->limit > 0) {
        resource_limit_ = m.fault->limit;
      }
      MethodRuntime rt;
      rt.service = &s;
      rt.method = &m;
      rt.block_ids.resize(m.block_count + 1, 0);
      std::string base = s.name + "/" + std::to_string(m.txn_id) + "/";
      for (uint32_t b = 1; b <= m.block_count; ++b)
        rt.block_ids[b] = fnv1a64(base + std::to_string(b));
      runtime_[s.name][m.txn_id] = std::move(rt);
    }
    state_[s.name] = ServiceState{};
  }
  for (const auto& p : manifest_.principals)
    principal_perms_[p.principal_id] = p.permissions;
  boot_mono_ms_ = mono_ms();
  log_->line('I', "SystemServer",
             "boot complete (services=" + std::to_string(manifest_.services.size()) +
                 " apis=" + std::to_string(manifest_.api_count()) +
                 " fingerprint=" + manifest_.fingerprint() + ")");
  for (const auto& s : manifest_.services)
    log_->line('I', "ServiceManager", "registered " + s.name);
}

bool SimCore::principal_has(uint32_t principal_id,
                            const std::string& perm) const {
  auto it = principal_perms_.find(principal_id);
  if (it == principal_perms_.end()) return false;  // unknown = zero-permission
  return it->second.count(perm) > 0;
}

bool SimCore::trigger_fires(const TriggerSpec& t, const ValueList& args,
                            bool decode_failed, const Bytes& raw_payload) const {
  auto arg_or_null = [&](uint32_t i) -> const Value* {
    return i < args.size() ? &args[i] : nullptr;
  };
  if (t.kind == "always") return true;
  if (t.kind == "boot_nonce_mod")
    return t.mod > 0 &&
           static_cast<int64_t>(options_.boot_nonce % static_cast<uint64_t>(t.mod)) == t.value;
  if (decode_failed) return false;  // arg predicates need decoded args
  if (t.kind == "i32_mask_eq") {
    const Value* v = arg_or_null(t.arg);
    return v && (v->as_i64() & t.mask) == t.value;
  }
  if (t.kind == "i32_outside") {
    const Value* v = arg_or_null(t.arg);
    return v && (v->as_i64() < t.lo || v->as_i64() > t.hi);
  }
  if (t.kind == "blob_null") {
    const Value* v = arg_or_null(t.arg);
    if (!v || v->tag != Tag::kBlob) return false;
    const auto& b = std::get<Bytes>(v->data);
    return b.empty() || b[0] == 0x00;
  }
  if (t.kind == "str_longer_than") {
    const Value* v = arg_or_null(t.arg);
    if (!v || v->tag != Tag::kStr) return false;
    return static_cast<int64_t>(std::get<std::string>(v->data).size()) > t.len;
  }
  (void)raw_payload;
  return false;
}

ExecResult SimCore::execute(const Request& req) {
  if (is_meta_service(req.service)) return dispatch_meta(req);

  ExecResult res;
  res.emit_feedback = options_.instrumented;
  ++exec_seq_;
  res.feedback.exec_seq = exec_seq_;

  auto sit = runtime_.find(req.service);
  if (sit == runtime_.end()) {
    res.response = Response::no_such_service();
    return res;
  }
  auto mit = sit->second.find(req.txn_id);
  if (mit == sit->second.end()) {
    res.response = Response::no_such_txn();
    return res;
  }
  MethodRuntime& rt = mit->second;
  const MethodSpec& method = *rt.method;
  const bool coverage_known = !method.no_coverage_info;
  if (coverage_known) {
    res.feedback.block_universe = method.block_count;
    res.feedback.blocks_hit =
        static_cast<uint32_t>(rt.session_blocks_hit.size());
  }

  // 1. Entry permission checks: fail-early, before any argument decoding, so
  // a denied call never executes (or covers) any body block.
  for (const auto& pc : method.permissions) {
    if (pc.position != PermPosition::kEntry) continue;
    if (!principal_has(req.principal_id, pc.name)) {
      res.response = Response::denied(pc.name);
      return res;
    }
  }

  // 2. Argument decode.
  DecodeResult decoded = decode_values(req.payload, method.params);
  if (!decoded.ok) {
    if (method.fault &&
        method.fault->fault_class == FaultClass::kParseCrash) {
      // JNI-forwarding APIs pass raw parcels straight to native code; a
      // malformed parcel dies there instead of raising BadParcel.
      log_->line('F', "CheckParcel",
                 "null dereference decoding parcel for " + req.service + "." +
                     method.name);
      res.action = ExecAction::kAbortProcess;
      return res;
    }
    res.response = Response::exception("BadParcel", decoded.error);
    return res;
  }

  // 3. Body with coverage emission and deep permission checks.
  std::map<uint32_t, uint32_t> edge_counts;  // edge index -> raw count
  uint64_t prev_block = 0;                   // entry pseudo-block
  std::optional<std::string> deep_denied;
  BodyCtx ctx;
  ctx.method = &method;
  ctx.args = &decoded.values;
  ctx.svc_state = &state_[req.service];
  ctx.emit = [&](uint32_t local_block) {
    if (coverage_known && local_block <= method.block_count) {
      uint64_t cur = rt.block_ids[local_block];
      ++edge_counts[edge_index(prev_block, cur)];
      prev_block = cur;
      rt.session_blocks_hit.insert(local_block);
    }
    for (const auto& pc : method.permissions) {
      if (pc.position == PermPosition::kDeep && pc.block == local_block &&
          !principal_has(req.principal_id, pc.name)) {
        deep_denied = pc.name;
        return false;
      }
    }
    return true;
  };
  bool body_completed = behavior_registry().at(method.behavior).fn(ctx);

  if (coverage_known) {
    res.feedback.blocks_hit =
        static_cast<uint32_t>(rt.session_blocks_hit.size());
    res.feedback.edges.assign(edge_counts.begin(), edge_counts.end());
  }

  if (deep_denied) {
    res.response = Response::denied(*deep_denied);
    return res;
  }
  (void)body_completed;

  // 4. Fault trigger evaluation.
  if (method.fault &&
      trigger_fires(method.fault->trigger, decoded.values, false, req.payload)) {
    const FaultSpec& fault = *method.fault;
    switch (fault.fault_class) {
      case FaultClass::kUncaughtException: {
        log_->line('E', "SystemServer",
                   "FATAL EXCEPTION IN SYSTEM PROCESS (" + req.service + "." +
                       method.name + "): SimException: unhandled argument state");
        res.action = ExecAction::kSoftReboot;
        return res;
      }
      case FaultClass::kFreeze: {
        if (fault.poison) poisoned_ = true;
        log_->line('W', req.service,
                   "dispatcher entering blocking section in " + method.name);
        res.action = ExecAction::kFreeze;
        return res;
      }
      case FaultClass::kResourceExhaustion: {
        ++resource_slots_used_;
        if (resource_slots_used_ >= resource_limit_) {
          log_->line('E', "ResourceTable",
                     "too many open resources (limit=" +
                         std::to_string(resource_limit_) + ")");
          res.action = ExecAction::kAbortProcess;
          return res;
        }
        res.response = Response::ok(Bytes{});
        return res;
      }
      case FaultClass::kParseCrash: {
        log_->line('F', "CheckParcel",
                   "null dereference in native handler for " + req.service +
                       "." + method.name);
        res.action = ExecAction::kAbortProcess;
        return res;
      }
      case FaultClass::kCollateralCrash: {
        res.action = ExecAction::kKillCompanion;
        res.response = Response::ok(ctx.reply);
        return res;
      }
    }
  }

  res.response = Response::ok(ctx.reply);
  return res;
}

ExecResult SimCore::dispatch_meta(const Request& req) {
  ExecResult res;
  res.emit_feedback = false;
  if (req.service == kManagerService) {
    switch (req.txn_id) {
      case kTxnListServices: res.response = meta_list(); return res;
      case kTxnDescribeService: res.response = meta_describe(req); return res;
      case kTxnPing: res.response = Response::ok(Bytes{}); return res;
      default: res.response = Response::no_such_txn(); return res;
    }
  }
  if (req.service == kIntrospectService) {
    switch (req.txn_id) {
      case kTxnStateDigest: res.response = meta_state_digest(); return res;
      case kTxnGroundTruth: res.response = meta_ground_truth(); return res;
      default: res.response = Response::no_such_txn(); return res;
    }
  }
  res.response = Response::no_such_service();
  return res;
}

namespace {
Bytes json_payload(const nlohmann::json& j) {
  std::string s = j.dump();
  return Bytes(s.begin(), s.end());
}
}  // namespace

Response SimCore::meta_list() const {
  nlohmann::json j;
  j["fingerprint"] = manifest_.fingerprint();
  auto names = nlohmann::json::array();
  for (const auto& s : manifest_.services) names.push_back(s.name);
  j["services"] = names;
  return Response::ok(json_payload(j));
}

Response SimCore::meta_describe(const Request& req) const {
  DecodeResult d = decode_values(req.payload, {ParamType{Tag::kStr, {}}});
  if (!d.ok) return Response::exception("BadParcel", d.error);
  const std::string name = std::get<std::string>(d.values[0].data);
  const ServiceSpec* svc = manifest_.find_service(name);
  if (!svc) return Response::no_such_service();
  nlohmann::json j;
  j["name"] = svc->name;
  j["interface"] = svc->interface_name;
  auto methods = nlohmann::json::array();
  for (const auto& m : svc->methods) {
    nlohmann::json mj;
    mj["name"] = m.name;
    mj["txn_id"] = m.txn_id;
    mj["params"] = param_list_to_strings(m.params);
    mj["block_count"] = m.block_count;
    if (!m.permissions.empty()) {
      auto perms = nlohmann::json::array();
      for (const auto& pc : m.permissions) {
        nlohmann::json pj;
        pj["name"] = pc.name;
        pj["position"] = pc.position == PermPosition::kEntry ? "entry" : "deep";
        perms.push_back(pj);
      }
      mj["permissions"] = perms;
    }
    methods.push_back(mj);
  }
  j["methods"] = methods;
  return Response::ok(json_payload(j));
}

uint64_t SimCore::state_digest() const {
  // Covers exactly the state a fuzz input can mutate: per-service kv tables
  // and counters plus the resource slot table. Reboot counters and coverage
  // bookkeeping are instrumentation-side and reported separately.
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [svc, st] : state_) {
    h = fnv1a64(svc, h);
    for (const auto& [k, v] : st.kv) {
      h = fnv1a64(k, h);
      h = fnv1a64(v, h);
    }
    h = fnv1a64(&st.counter, sizeof(st.counter), h);
  }
  h = fnv1a64(&resource_slots_used_, sizeof(resource_slots_used_), h);
  return h;
}

Response SimCore::meta_state_digest() const {
  nlohmann::json j;
  j["digest"] = hex64(state_digest());
  j["reboot_count"] = reboot_count_;
  j["uptime_ms"] = mono_ms() - boot_mono_ms_;
  j["boot_nonce"] = options_.boot_nonce;
  j["watchdog_kills"] = watchdog_kills_;
  j["resource_slots_used"] = resource_slots_used_;
  j["exec_count"] = exec_seq_;
  j["instrumented"] = options_.instrumented;
  if (introspection_extra_) {
    nlohmann::json extra = introspection_extra_();
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = *it;
  }
  return Response::ok(json_payload(j));
}

Response SimCore::meta_ground_truth() const {
  nlohmann::json j;
  j["target_fingerprint"] = manifest_.fingerprint();
  nlohmann::json perms = nlohmann::json::object();
  for (const auto& [api, names] : manifest_.ground_truth_permissions())
    perms[api] = names;
  j["permissions"] = perms;
  return Response::ok(json_payload(j));
}

void SimCore::soft_reboot(const std::string& reason) {
  for (auto& [name, st] : state_) st = ServiceState{};
  resource_slots_used_ = 0;
  ++reboot_count_;
  boot_mono_ms_ = mono_ms();
  log_->line('I', "SystemServer",
             "soft-reboot #" + std::to_string(reboot_count_) + " (" + reason + ")");
}

}  // namespace anthill
