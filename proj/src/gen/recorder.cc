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

#include "gen/recorder.h"

#include <algorithm>
#include <map>

#include "common/clock.h"
#include "common/hash.h"

namespace anthill {

nlohmann::json InputRecord::to_json() const {
  nlohmann::json j;
  j["seq"] = seq;
  j["ts"] = ts_us;
  j["service"] = service;
  j["txn_id"] = txn_id;
  j["raw_hex"] = to_hex(raw);
  if (decoded) {
    auto arr = nlohmann::json::array();
    for (const auto& v : *decoded) arr.push_back(v.to_json());
    j["decoded"] = arr;
  }
  j["outcome"] = outcome;
  return j;
}

void InputRecorder::open(const std::filesystem::path& path) {
  writer_.open(path);
  next_seq_ = 1;
}

uint64_t InputRecorder::begin(const std::string& service, uint32_t txn_id,
                              const Bytes& raw,
                              const std::optional<ValueList>& decoded) {
  uint64_t seq = next_seq_++;
  nlohmann::json j;
  j["t"] = "in";
  j["seq"] = seq;
  j["ts"] = now_us();
  j["service"] = service;
  j["txn_id"] = txn_id;
  j["raw_hex"] = to_hex(raw);
  if (decoded) {
    auto arr = nlohmann::json::array();
    for (const auto& v : *decoded) arr.push_back(v.to_json());
    j["decoded"] = arr;
  }
  writer_.append(j);
  return seq;
}

void InputRecorder::finish(uint64_t seq, const nlohmann::json& outcome) {
  nlohmann::json j;
  j["t"] = "out";
  j["seq"] = seq;
  j["outcome"] = outcome;
  writer_.append(j);
}

std::vector<InputRecord> load_input_records(const std::filesystem::path& path) {
  std::map<uint64_t, InputRecord> by_seq;
  for (const auto& line : read_jsonl(path)) {
    if (!line.is_object() || !line.contains("t")) continue;
    std::string t = line["t"].get<std::string>();
    if (t == "in") {
      InputRecord rec;
      rec.seq = line.value("seq", uint64_t{0});
      rec.ts_us = line.value("ts", int64_t{0});
      rec.service = line.value("service", "");
      rec.txn_id = line.value("txn_id", 0u);
      Bytes raw;
      if (from_hex(line.value("raw_hex", ""), raw)) rec.raw = std::move(raw);
      if (line.contains("decoded")) {
        ValueList vals;
        bool ok = true;
        for (const auto& vj : line["decoded"]) {
          auto v = Value::from_json(vj);
          if (!v) { ok = false; break; }
          vals.push_back(std::move(*v));
        }
        if (ok) rec.decoded = std::move(vals);
      }
      rec.outcome = {{"status", "pending"}};
      by_seq[rec.seq] = std::move(rec);
    } else if (t == "out") {
      uint64_t seq = line.value("seq", uint64_t{0});
      auto it = by_seq.find(seq);
      if (it != by_seq.end()) it->second.outcome = line.value("outcome", nlohmann::json());
    }
  }
  std::vector<InputRecord> out;
  out.reserve(by_seq.size());
  for (auto& [seq, rec] : by_seq) out.push_back(std::move(rec));
  return out;
}

void write_records_jsonl(const std::filesystem::path& path,
                         const std::vector<InputRecord>& records) {
  std::error_code ec;
  std::filesystem::remove(path, ec);
  JsonlWriter w(path);
  for (const auto& rec : records) {
    nlohmann::json in;
    in["t"] = "in";
    in["seq"] = rec.seq;
    in["ts"] = rec.ts_us;
    in["service"] = rec.service;
    in["txn_id"] = rec.txn_id;
    in["raw_hex"] = to_hex(rec.raw);
    if (rec.decoded) {
      auto arr = nlohmann::json::array();
      for (const auto& v : *rec.decoded) arr.push_back(v.to_json());
      in["decoded"] = arr;
    }
    w.append(in);
    w.append({{"t", "out"}, {"seq", rec.seq}, {"outcome", rec.outcome}});
  }
}

nlohmann::json outcome_ok() { return {{"status", "ok"}}; }

nlohmann::json outcome_status(const char* status) {
  return {{"status", status}};
}

nlohmann::json outcome_denied(const std::string& permission) {
  return {{"status", "permission_denied"}, {"permission", permission}};
}

nlohmann::json outcome_exception(const std::string& cls, const std::string& msg) {
  return {{"status", "exception"}, {"class", cls}, {"message", msg}};
}

}  // namespace anthill
