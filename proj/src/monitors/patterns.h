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
// Crash classification pattern table. Ordered; the first pattern whose
// substring appears in a log line wins. Ships as a data file
// (data/patterns.json) so new heuristics can be added without a rebuild;
// the built-in table is the fallback and the reference for tests.

#ifndef ANTHILL_MONITORS_PATTERNS_H_
#define ANTHILL_MONITORS_PATTERNS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace anthill {

enum class CrashClass {
  kUncaughtException,
  kFreeze,
  kResourceExhaustion,
  kParseCrash,
  kCollateralCrash,
  kLivenessLoss,
};

const char* crash_class_name(CrashClass c);
std::optional<CrashClass> crash_class_from_name(const std::string& s);

struct Pattern {
  std::string id;
  std::string substring;
  CrashClass crash_class = CrashClass::kLivenessLoss;
  // How far back (seconds before the evidence) the suspicion window reaches.
  // The freeze patterns look further back because the watchdog line lags the
  // fatal input by a full watchdog window.
  double lookback_s = 5.0;
};

class PatternTable {
 public:
  static PatternTable builtin();
  static PatternTable load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  const Pattern* match(const std::string& line) const;
  const std::vector<Pattern>& patterns() const { return patterns_; }

 private:
  std::vector<Pattern> patterns_;
};

}  // namespace anthill

#endif  // ANTHILL_MONITORS_PATTERNS_H_
