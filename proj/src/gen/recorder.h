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
// Persistent, replayable record of every generated invocation. The record
// line is flushed to inputs.jsonl BEFORE the frame leaves the process, so a
// target crash can never lose the fatal input; the outcome arrives later as
// an amendment line keyed by sequence number (see docs/artifacts.md).

#ifndef ANTHILL_GEN_RECORDER_H_
#define ANTHILL_GEN_RECORDER_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "common/bytes.h"
#include "common/fs.h"
#include "wire/value.h"

namespace anthill {

struct InputRecord {
  uint64_t seq = 0;
  int64_t ts_us = 0;
  std::string service;
  uint32_t txn_id = 0;
  Bytes raw;  // the TLV payload region as sent
  std::optional<ValueList> decoded;
  nlohmann::json outcome;  // {"status": ...}; "pending" if never amended

  nlohmann::json to_json() const;
};

class InputRecorder {
 public:
  InputRecorder() = default;
  explicit InputRecorder(const std::filesystem::path& path) { open(path); }

  void open(const std::filesystem::path& path);

  // Persists the input and returns its sequence number. Call before sending.
  uint64_t begin(const std::string& service, uint32_t txn_id, const Bytes& raw,
                 const std::optional<ValueList>& decoded);
  void finish(uint64_t seq, const nlohmann::json& outcome);

  uint64_t records_written() const { return next_seq_ - 1; }

 private:
  JsonlWriter writer_;
  uint64_t next_seq_ = 1;
};

// Merges input and outcome lines back into records, in sequence order.
std::vector<InputRecord> load_input_records(const std::filesystem::path& path);

// Writes records back out in the same in/out line schema (reproducer
// bundles are replayable with the same loader).
void write_records_jsonl(const std::filesystem::path& path,
                         const std::vector<InputRecord>& records);

// Outcome helpers shared by harness and replayer.
nlohmann::json outcome_ok();
nlohmann::json outcome_status(const char* status);
nlohmann::json outcome_denied(const std::string& permission);
nlohmann::json outcome_exception(const std::string& cls, const std::string& msg);

}  // namespace anthill

#endif  // ANTHILL_GEN_RECORDER_H_
