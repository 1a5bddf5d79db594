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

#include "monitors/patterns.h"

#include "common/error.h"
#include "common/fs.h"

namespace anthill {

const char* crash_class_name(CrashClass c) {
  switch (c) {
    case CrashClass::kUncaughtException: return "uncaught_exception";
    case CrashClass::kFreeze: return "freeze";
    case CrashClass::kResourceExhaustion: return "resource_exhaustion";
    case CrashClass::kParseCrash: return "parse_crash";
    case CrashClass::kCollateralCrash: return "collateral_crash";
    case CrashClass::kLivenessLoss: return "liveness_loss";
  }
  return "?";
}

std::optional<CrashClass> crash_class_from_name(const std::string& s) {
  if (s == "uncaught_exception") return CrashClass::kUncaughtException;
  if (s == "freeze") return CrashClass::kFreeze;
  if (s == "resource_exhaustion") return CrashClass::kResourceExhaustion;
  if (s == "parse_crash") return CrashClass::kParseCrash;
  if (s == "collateral_crash") return CrashClass::kCollateralCrash;
  if (s == "liveness_loss") return CrashClass::kLivenessLoss;
  return std::nullopt;
}

PatternTable PatternTable::builtin() {
  PatternTable t;
  t.patterns_ = {
      {"watchdog_kill", "WATCHDOG KILLING SYSTEM PROCESS", CrashClass::kFreeze, 15.0},
      {"fatal_exception", "FATAL EXCEPTION IN SYSTEM PROCESS",
       CrashClass::kUncaughtException, 5.0},
      {"resource_exhausted", "too many open resources",
       CrashClass::kResourceExhaustion, 5.0},
      {"parse_crash", "CheckParcel:", CrashClass::kParseCrash, 5.0},
      {"companion_death", "Process ui has died", CrashClass::kCollateralCrash, 5.0},
      {"bootloop", "BOOTLOOP", CrashClass::kFreeze, 45.0},
  };
  return t;
}

PatternTable PatternTable::load(const std::filesystem::path& path) {
  auto doc = read_json_file(path);
  PatternTable t;
  for (const auto& pj : doc.at("patterns")) {
    Pattern p;
    p.id = pj.at("id").get<std::string>();
    p.substring = pj.at("substring").get<std::string>();
    auto cls = crash_class_from_name(pj.at("class").get<std::string>());
    if (!cls)
      throw Error(ErrorKind::kValidation,
                  "unknown crash class in pattern '" + p.id + "'");
    p.crash_class = *cls;
    p.lookback_s = pj.value("lookback_s", 5.0);
    t.patterns_.push_back(std::move(p));
  }
  return t;
}

void PatternTable::save(const std::filesystem::path& path) const {
  nlohmann::json doc;
  auto arr = nlohmann::json::array();
  for (const auto& p : patterns_) {
    nlohmann::json pj;
    pj["id"] = p.id;
    pj["substring"] = p.substring;
    pj["class"] = crash_class_name(p.crash_class);
    pj["lookback_s"] = p.lookback_s;
    arr.push_back(pj);
  }
  doc["patterns"] = arr;
  write_json_file(path, doc);
}

const Pattern* PatternTable::match(const std::string& line) const {
  for (const auto& p : patterns_)
    if (line.find(p.substring) != std::string::npos) return &p;
  return nullptr;
}

}  // namespace anthill
