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

#include "verify/verify.h"

#include "common/clock.h"
#include "common/error.h"
#include "common/fs.h"
#include "verify/ddmin.h"

namespace anthill {

const char* repro_outcome_name(ReproOutcome o) {
  switch (o) {
    case ReproOutcome::kReproduced: return "reproduced";
    case ReproOutcome::kFalsePositive: return "false_positive";
    case ReproOutcome::kFlaky: return "flaky";
    case ReproOutcome::kInconclusive: return "inconclusive";
  }
  return "?";
}

nlohmann::json ReproResult::to_json() const {
  nlohmann::json j;
  j["outcome"] = repro_outcome_name(outcome);
  j["attempts"] = attempts_run;
  j["matched_class"] =
      matched_class ? crash_class_name(*matched_class) : nullptr;
  j["used_full_log"] = used_full_log;
  j["pattern_ids"] = pattern_ids;
  j["reproducer_len"] = reproducer.size();
  return j;
}

namespace {

std::vector<InputRecord> slice_window(const std::vector<InputRecord>& records,
                                      uint64_t first, uint64_t last) {
  std::vector<InputRecord> out;
  for (const auto& r : records)
    if (r.seq >= first && r.seq <= last) out.push_back(r);
  return out;
}

struct AttemptOutcome {
  bool booted = false;
  bool matched = false;
  std::set<std::string> pattern_ids;
};

AttemptOutcome run_attempt(const std::vector<InputRecord>& slice,
                           CrashClass expected, const VerifyOptions& options,
                           int attempt_index) {
  AttemptOutcome out;
  InstanceOptions inst_opts = options.instance;
  inst_opts.log_path = options.instance.work_dir /
                       ("verify-" + std::to_string(now_us()) + "-" +
                        std::to_string(attempt_index) + ".log");
  if (options.nonce_per_attempt)
    inst_opts.boot_nonce = static_cast<uint64_t>(attempt_index + 1);
  InstanceHandle inst;
  try {
    // Verification runs on non-intrusive monitors only: Vanilla flavor.
    inst = fresh_instance(InstanceFlavor::kVanilla, inst_opts);
  } catch (const Error&) {
    return out;  // boot failure: inconclusive attempt
  }
  out.booted = true;
  ReplaySignals signals =
      replay_records(inst, slice, PatternTable::builtin(), options.replay);
  out.matched = signals.has_class(expected);
  out.pattern_ids = signals.pattern_ids;
  teardown_instance(inst);
  return out;
}

}  // namespace

ReproResult verify_candidate(const CrashCandidate& candidate,
                             const std::vector<InputRecord>& records,
                             const VerifyOptions& options) {
  ReproResult result;
  auto slice = slice_window(records, candidate.window_first_seq,
                            candidate.window_last_seq);
  if (slice.empty()) slice = records;

  auto run_phase = [&](const std::vector<InputRecord>& inputs,
                       int& matches, int& boots) {
    for (int i = 0; i < options.attempts; ++i) {
      AttemptOutcome att =
          run_attempt(inputs, candidate.crash_class, options, i);
      ++result.attempts_run;
      if (!att.booted) continue;
      ++boots;
      if (att.matched) ++matches;
      result.pattern_ids.insert(att.pattern_ids.begin(), att.pattern_ids.end());
      // All-or-nothing decisions only need the remaining attempts while the
      // outcome is still open; keep running them all for attempt parity.
    }
  };

  int matches = 0, boots = 0;
  run_phase(slice, matches, boots);
  if (boots == 0) {
    result.outcome = ReproOutcome::kInconclusive;
    return result;
  }
  if (matches == boots) {
    result.outcome = ReproOutcome::kReproduced;
    result.matched_class = candidate.crash_class;
    result.reproducer = slice;
    return result;
  }
  if (matches > 0) {
    result.outcome = ReproOutcome::kFlaky;
    result.matched_class = candidate.crash_class;
    result.reproducer = slice;
    return result;
  }

  // The window slice alone did not reproduce. State accumulated before the
  // window (leak counters!) may be required: fall back to the full log.
  if (slice.size() < records.size()) {
    int full_matches = 0, full_boots = 0;
    run_phase(records, full_matches, full_boots);
    if (full_boots == 0) {
      result.outcome = ReproOutcome::kInconclusive;
      return result;
    }
    if (full_matches == full_boots) {
      result.outcome = ReproOutcome::kReproduced;
      result.matched_class = candidate.crash_class;
      result.used_full_log = true;
      result.reproducer = records;
      return result;
    }
    if (full_matches > 0) {
      result.outcome = ReproOutcome::kFlaky;
      result.matched_class = candidate.crash_class;
      result.used_full_log = true;
      result.reproducer = records;
      return result;
    }
  }
  result.outcome = ReproOutcome::kFalsePositive;
  return result;
}

std::vector<InputRecord> minify_records(
    const std::vector<InputRecord>& reproducer,
    const std::function<bool(const std::vector<InputRecord>&)>& check,
    size_t* check_calls) {
  return ddmin_list<InputRecord>(reproducer, check, check_calls);
}

std::function<bool(const std::vector<InputRecord>&)> make_replay_check(
    CrashClass expected, const VerifyOptions& options) {
  return [expected, options](const std::vector<InputRecord>& inputs) {
    InstanceOptions inst_opts = options.instance;
    inst_opts.log_path = options.instance.work_dir /
                         ("minify-" + std::to_string(now_us()) + ".log");
    InstanceHandle inst = fresh_instance(InstanceFlavor::kVanilla, inst_opts);
    ReplaySignals signals =
        replay_records(inst, inputs, PatternTable::builtin(), options.replay);
    teardown_instance(inst);
    return signals.has_class(expected);
  };
}

}  // namespace anthill
