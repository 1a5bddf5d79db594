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
// Auto-verification of crash candidates: replay the suspicion-window slice
// on fresh Vanilla instances (full-log fallback when the slice alone does
// not reproduce — windows under-cover state-dependent faults), classify the
// outcome as Reproduced / FalsePositive / Flaky, and minify confirmed
// reproducers with ddmin.

#ifndef ANTHILL_VERIFY_VERIFY_H_
#define ANTHILL_VERIFY_VERIFY_H_

#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "json.hpp"

#include "gen/recorder.h"
#include "monitors/classify.h"
#include "verify/replay.h"
#include "worker/instance.h"

namespace anthill {

enum class ReproOutcome { kReproduced, kFalsePositive, kFlaky, kInconclusive };

const char* repro_outcome_name(ReproOutcome o);

struct ReproResult {
  ReproOutcome outcome = ReproOutcome::kInconclusive;
  int attempts_run = 0;
  std::optional<CrashClass> matched_class;
  bool used_full_log = false;
  std::set<std::string> pattern_ids;  // union over attempts (bootloop marker!)
  std::vector<InputRecord> reproducer;  // the slice that reproduced

  nlohmann::json to_json() const;
};

struct VerifyOptions {
  int attempts = 3;
  InstanceOptions instance;  // manifest, binary, scratch dir, log path base
  ReplayOptions replay;
  // Attempt i boots the instance with nonce i+1, so state-keyed
  // nondeterminism surfaces deterministically across attempts.
  bool nonce_per_attempt = true;
};

// Replays candidate.window out of `records` up to options.attempts times,
// each on a fresh Vanilla instance. Reproduced when every attempt shows the
// candidate's class, FalsePositive when none does (after the full-log
// fallback also fails), Flaky otherwise. Boot failures beyond retries yield
// kInconclusive.
ReproResult verify_candidate(const CrashCandidate& candidate,
                             const std::vector<InputRecord>& records,
                             const VerifyOptions& options);

// ddmin over a reproducer against an arbitrary check (real replay or an
// oracle in tests). Preserves relative order; the result is 1-minimal.
std::vector<InputRecord> minify_records(
    const std::vector<InputRecord>& reproducer,
    const std::function<bool(const std::vector<InputRecord>&)>& check,
    size_t* check_calls = nullptr);

// The standard check for minify: replay the list on a fresh Vanilla instance
// and require the expected class among the observed signals.
std::function<bool(const std::vector<InputRecord>&)> make_replay_check(
    CrashClass expected, const VerifyOptions& options);

}  // namespace anthill

#endif  // ANTHILL_VERIFY_VERIFY_H_
