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

#include "monitors/classify.h"

#include <algorithm>

namespace anthill {

LogEvent parse_log_line(const std::string& line, int64_t ts_us) {
  LogEvent ev;
  ev.ts_us = ts_us;
  ev.raw = line;
  // Format: one-char level, space, tag, ": ", message.
  if (line.size() >= 4 && line[1] == ' ') {
    auto colon = line.find(": ", 2);
    if (colon != std::string::npos) {
      ev.level = line[0];
      ev.tag = line.substr(2, colon - 2);
      ev.message = line.substr(colon + 2);
    }
  }
  return ev;
}

void SeqTimeline::add(int64_t ts_us, uint64_t seq) { samples_[ts_us] = seq; }

std::pair<uint64_t, uint64_t> SeqTimeline::window(int64_t evidence_ts_us,
                                                  double lookback_s) const {
  if (samples_.empty()) return {0, 0};
  if (evidence_ts_us <= 0) return {samples_.begin()->second, max_seq()};
  int64_t from = evidence_ts_us - static_cast<int64_t>(lookback_s * 1e6);
  auto lo = samples_.lower_bound(from);
  auto hi = samples_.upper_bound(evidence_ts_us);
  if (lo == samples_.end() || lo == hi) {
    // Reconstruction failed; fall back to every input so far.
    return {samples_.begin()->second, max_seq()};
  }
  uint64_t first = lo->second;
  uint64_t last = std::prev(hi)->second;
  return {first, last};
}

nlohmann::json CrashCandidate::to_json() const {
  nlohmann::json j;
  j["class"] = crash_class_name(crash_class);
  j["pattern_id"] = pattern_id;
  j["evidence"] = first_evidence.raw;
  j["evidence_ts_us"] = first_evidence.ts_us;
  j["window"] = {window_first_seq, window_last_seq};
  j["evidence_degraded"] = evidence_degraded;
  return j;
}

std::optional<CrashCandidate> CrashCandidate::from_json(const nlohmann::json& j) {
  CrashCandidate c;
  auto cls = crash_class_from_name(j.value("class", ""));
  if (!cls) return std::nullopt;
  c.crash_class = *cls;
  c.pattern_id = j.value("pattern_id", "");
  c.first_evidence = parse_log_line(j.value("evidence", ""),
                                    j.value("evidence_ts_us", int64_t{0}));
  if (j.contains("window") && j["window"].is_array() && j["window"].size() == 2) {
    c.window_first_seq = j["window"][0].get<uint64_t>();
    c.window_last_seq = j["window"][1].get<uint64_t>();
  }
  c.evidence_degraded = j.value("evidence_degraded", false);
  return c;
}

std::optional<CrashCandidate> LogClassifier::feed_line(
    const std::string& line, int64_t ts_us, const SeqTimeline& timeline) {
  const Pattern* p = table_.match(line);
  if (!p) return std::nullopt;
  CrashCandidate c;
  c.crash_class = p->crash_class;
  c.pattern_id = p->id;
  c.first_evidence = parse_log_line(line, ts_us);
  c.first_evidence.pattern_id = p->id;
  auto [first, last] = timeline.window(ts_us, p->lookback_s);
  c.window_first_seq = first;
  c.window_last_seq = last;
  return c;
}

std::vector<CrashCandidate> LogClassifier::classify_all(
    const std::vector<std::string>& lines, const SeqTimeline& timeline) {
  std::vector<CrashCandidate> out;
  for (const auto& line : lines) {
    auto c = feed_line(line, 0, timeline);
    if (c) out.push_back(std::move(*c));
  }
  return out;
}

namespace {

bool mergeable(const CrashCandidate& a, const CrashCandidate& b) {
  bool windows_overlap = a.window_first_seq <= b.window_last_seq &&
                         b.window_first_seq <= a.window_last_seq;
  if (!windows_overlap) return false;
  if (a.crash_class == b.crash_class) return true;
  auto pair = [&](CrashClass x, CrashClass y) {
    return (a.crash_class == x && b.crash_class == y) ||
           (a.crash_class == y && b.crash_class == x);
  };
  return pair(CrashClass::kFreeze, CrashClass::kLivenessLoss);
}

}  // namespace

std::vector<CrashCandidate> merge_candidates(std::vector<CrashCandidate> cands) {
  std::vector<CrashCandidate> out;
  for (auto& c : cands) {
    bool merged = false;
    for (auto& existing : out) {
      if (!mergeable(existing, c)) continue;
      existing.window_first_seq =
          std::min(existing.window_first_seq, c.window_first_seq);
      existing.window_last_seq =
          std::max(existing.window_last_seq, c.window_last_seq);
      if (existing.crash_class == CrashClass::kLivenessLoss &&
          c.crash_class == CrashClass::kFreeze) {
        existing.crash_class = CrashClass::kFreeze;
        existing.pattern_id = c.pattern_id;
        existing.first_evidence = c.first_evidence;
      }
      merged = true;
      break;
    }
    if (!merged) out.push_back(std::move(c));
  }
  return out;
}

std::optional<CrashCandidate> LivenessLossDetector::tick(
    bool probe_dead, bool have_fatal_candidate, int64_t now_us,
    const SeqTimeline& timeline) {
  if (!probe_dead) {
    first_failure_us_.reset();
    return std::nullopt;
  }
  if (emitted_ || have_fatal_candidate) return std::nullopt;
  if (!first_failure_us_) {
    first_failure_us_ = now_us;
    return std::nullopt;
  }
  if (now_us - *first_failure_us_ < static_cast<int64_t>(grace_s_ * 1e6))
    return std::nullopt;
  emitted_ = true;
  CrashCandidate c;
  c.crash_class = CrashClass::kLivenessLoss;
  c.first_evidence.ts_us = *first_failure_us_;
  c.first_evidence.raw = "liveness probe failed beyond grace period";
  auto [first, last] = timeline.window(*first_failure_us_, 5.0);
  c.window_first_seq = first;
  c.window_last_seq = last;
  return c;
}

}  // namespace anthill
