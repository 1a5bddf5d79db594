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
// Turns raw monitor signals (log lines, liveness probes) into crash-report
// candidates carrying a suspicion window of input sequence numbers.

#ifndef ANTHILL_MONITORS_CLASSIFY_H_
#define ANTHILL_MONITORS_CLASSIFY_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "monitors/patterns.h"

namespace anthill {

struct LogEvent {
  int64_t ts_us = 0;  // observation time; 0 when classifying post-hoc
  char level = 0;
  std::string tag;
  std::string message;
  std::optional<std::string> pattern_id;
  std::string raw;
};

// Parses `LEVEL TAG: message`. Lines outside the format keep raw only.
LogEvent parse_log_line(const std::string& line, int64_t ts_us);

// Maps evidence timestamps to windows of input sequence numbers. Fed from
// input-record timestamps; when reconstruction fails the window widens to
// every input seen so far (over-approximation is safe: verification replays
// the slice wholesale).
class SeqTimeline {
 public:
  void add(int64_t ts_us, uint64_t seq);
  std::pair<uint64_t, uint64_t> window(int64_t evidence_ts_us,
                                       double lookback_s) const;
  uint64_t max_seq() const { return samples_.empty() ? 0 : samples_.rbegin()->second; }
  bool empty() const { return samples_.empty(); }

 private:
  std::map<int64_t, uint64_t> samples_;  // ts -> seq (monotone in both)
};

struct CrashCandidate {
  CrashClass crash_class = CrashClass::kLivenessLoss;
  std::string pattern_id;  // empty for liveness loss
  LogEvent first_evidence;
  uint64_t window_first_seq = 0;
  uint64_t window_last_seq = 0;
  bool evidence_degraded = false;

  nlohmann::json to_json() const;
  static std::optional<CrashCandidate> from_json(const nlohmann::json& j);
};

// Incremental classifier: feed lines as they appear; candidates come out as
// their first-evidence line arrives. First matching pattern wins per line.
class LogClassifier {
 public:
  explicit LogClassifier(PatternTable table) : table_(std::move(table)) {}

  std::optional<CrashCandidate> feed_line(const std::string& line,
                                          int64_t ts_us,
                                          const SeqTimeline& timeline);

  // Post-hoc classification of a whole log (timestamps unknown; windows
  // over-approximate to all inputs).
  std::vector<CrashCandidate> classify_all(const std::vector<std::string>& lines,
                                           const SeqTimeline& timeline);

  const PatternTable& table() const { return table_; }

 private:
  PatternTable table_;
};

// Merges candidates whose windows overlap and whose classes are identical or
// the (Freeze, LivenessLoss) pair, keeping the earliest evidence; the merged
// class of that pair is Freeze. Shared by the worker (pre-verification) and
// the analyzer (finding dedup).
std::vector<CrashCandidate> merge_candidates(std::vector<CrashCandidate> cands);

// Grace-period fallback: a dead probe with no classified fatal evidence
// within the grace period becomes a LivenessLoss candidate.
class LivenessLossDetector {
 public:
  explicit LivenessLossDetector(double grace_s = 3.0) : grace_s_(grace_s) {}

  // Call once per monitor tick. `probe_dead` = dispatcher or process dead;
  // `have_fatal_candidate` = some pattern candidate already covers this.
  std::optional<CrashCandidate> tick(bool probe_dead, bool have_fatal_candidate,
                                     int64_t now_us, const SeqTimeline& timeline);

 private:
  double grace_s_;
  std::optional<int64_t> first_failure_us_;
  bool emitted_ = false;
};

}  // namespace anthill

#endif  // ANTHILL_MONITORS_CLASSIFY_H_
