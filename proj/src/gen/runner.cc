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

#include "gen/runner.h"

#include <signal.h>

#include <atomic>

#include "common/clock.h"
#include "common/fs.h"
#include "gen/harness.h"

namespace anthill {

namespace {

std::atomic<bool> g_stop{false};

void handle_stop(int) { g_stop.store(true); }

}  // namespace

int run_generator_session(const GenRunnerOptions& options) {
  g_stop.store(false);
  signal(SIGTERM, handle_stop);
  signal(SIGINT, handle_stop);

  std::filesystem::create_directories(options.out_dir);
  InputRecorder recorder(options.out_dir / "inputs.jsonl");

  Harness::Options harness_opts;
  harness_opts.endpoint = options.endpoint;
  harness_opts.feedback_endpoint = options.feedback_endpoint;
  harness_opts.principal_id = options.principal_id;
  Harness harness(harness_opts, &recorder);

  auto generator = make_generator(
      options.config,
      options.descriptor ? &*options.descriptor : nullptr);

  CoverageMap session_map;
  uint32_t max_blocks_hit = 0;
  uint32_t block_universe = 0;
  bool saw_feedback = false;
  uint64_t execs = 0;
  uint64_t target_deaths = 0;
  uint64_t timeouts = 0;
  uint64_t consecutive_failures = 0;
  std::string ended_by = "budget";

  const int64_t start_ms = mono_ms();
  const int64_t started_us = now_us();
  const int64_t deadline_ms =
      start_ms + static_cast<int64_t>(options.budget_s * 1000.0);
  int64_t last_map_write_ms = start_ms;

  auto write_map = [&] {
    write_coverage_file(options.out_dir / "coverage.bin", session_map);
  };
  write_map();

  for (;;) {
    if (g_stop.load()) {
      ended_by = "signal";
      break;
    }
    if (options.budget_execs) {
      if (execs >= *options.budget_execs) {
        ended_by = "exec_budget";
        break;
      }
    } else if (mono_ms() >= deadline_ms) {
      break;
    }
    // A target that stays unreachable for ~5s is gone for good; a soft
    // reboot comes back within milliseconds.
    if (consecutive_failures >= 50) {
      ended_by = "target_dead";
      break;
    }

    std::optional<ValueList> decoded;
    Bytes payload = generator->next(&decoded);
    ExecOutcome out =
        harness.send(options.service, options.txn_id, payload, decoded);
    ++execs;

    if (out.kind == ExecOutcome::Kind::kResponse) {
      consecutive_failures = 0;
    } else {
      if (out.kind == ExecOutcome::Kind::kTimeout)
        ++timeouts;
      else
        ++target_deaths;
      ++consecutive_failures;
      sleep_ms(100);
    }

    if (out.feedback) {
      saw_feedback = true;
      fold_edges(out.feedback->edges, session_map);
      max_blocks_hit = std::max(max_blocks_hit, out.feedback->blocks_hit);
      block_universe = out.feedback->block_universe;
    }
    generator->observe(out.feedback);

    int64_t now = mono_ms();
    if (now - last_map_write_ms >= 2000) {
      write_map();
      last_map_write_ms = now;
    }
  }

  write_map();
  nlohmann::json stats;
  stats["service"] = options.service;
  stats["txn_id"] = options.txn_id;
  stats["kind"] = gen_kind_name(options.config.kind);
  stats["seed"] = options.config.seed;
  stats["principal_id"] = options.principal_id;
  stats["execs"] = execs;
  stats["target_deaths"] = target_deaths;
  stats["timeouts"] = timeouts;
  stats["corpus_size"] = generator->corpus_size();
  stats["ended_by"] = ended_by;
  stats["started_us"] = started_us;
  stats["ended_us"] = now_us();
  if (saw_feedback) {
    stats["distinct_blocks"] = max_blocks_hit;
    stats["block_universe"] = block_universe;
    auto frac = coverage_fraction(max_blocks_hit, block_universe);
    if (frac)
      stats["coverage_fraction"] = *frac;
    else
      stats["coverage_fraction"] = nullptr;
  }
  write_json_file(options.out_dir / "gen_stats.json", stats);
  return 0;
}

}  // namespace anthill
