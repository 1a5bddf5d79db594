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

#include "worker/worker.h"

#include <unistd.h>

#include <atomic>
#include <iostream>
#include <mutex>
#include <set>
#include <thread>

#include "common/clock.h"
#include "common/error.h"
#include "common/fs.h"
#include "common/logging.h"
#include "common/proc.h"
#include "monitors/classify.h"
#include "monitors/liveness.h"
#include "monitors/log_tail.h"
#include "verify/verify.h"
#include "worker/instance.h"

namespace anthill {

namespace {

const char* kCfgKeys[] = {"manifest", "target_binary", "surface",
                          "pattern_table", "generator", "principal_id",
                          "health_cadence_s", "snapshot_cadence_s",
                          "boot_timeout_s", "boot_retries", "verify_attempts",
                          "max_verified_candidates", "heartbeat_period_s"};

GenConfig gen_config_from_json(const nlohmann::json& j) {
  GenConfig g;
  auto kind = gen_kind_from_name(j.value("kind", "randfuzz"));
  if (!kind)
    throw Error(ErrorKind::kConfig,
                "unknown generator kind '" + j.value("kind", "") + "'");
  g.kind = *kind;
  g.seed = j.value("seed", uint64_t{1});
  g.max_payload = j.value("max_payload", 4096u);
  g.population = j.value("population", 50u);
  g.havoc_cycles = j.value("havoc_cycles", 256u);
  return g;
}

nlohmann::json gen_config_to_json(const GenConfig& g) {
  return {{"kind", gen_kind_name(g.kind)},
          {"seed", g.seed},
          {"max_payload", g.max_payload},
          {"population", g.population},
          {"havoc_cycles", g.havoc_cycles}};
}

}  // namespace

WorkerConfig WorkerConfig::from_json(const nlohmann::json& j) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : kCfgKeys) known |= (it.key() == k);
    if (!known)
      throw Error(ErrorKind::kConfig, "unknown worker config key '" + it.key() + "'");
  }
  WorkerConfig c;
  c.manifest = j.at("manifest").get<std::string>();
  c.target_binary = j.value("target_binary", std::string());
  if (c.target_binary.empty()) c.target_binary = self_exe_path();
  c.surface = j.value("surface", std::string());
  c.pattern_table = j.value("pattern_table", std::string());
  if (j.contains("generator")) c.generator = gen_config_from_json(j["generator"]);
  c.principal_id = j.value("principal_id", 0u);
  c.health_cadence_s = j.value("health_cadence_s", 1.0);
  c.snapshot_cadence_s = j.value("snapshot_cadence_s", 10.0);
  c.boot_timeout_s = j.value("boot_timeout_s", 15.0);
  c.boot_retries = j.value("boot_retries", 2);
  c.verify_attempts = j.value("verify_attempts", 3);
  c.max_verified_candidates = j.value("max_verified_candidates", size_t{4});
  c.heartbeat_period_s = j.value("heartbeat_period_s", 2.0);
  return c;
}

nlohmann::json WorkerConfig::to_json() const {
  return {{"manifest", manifest.string()},
          {"target_binary", target_binary.string()},
          {"surface", surface.string()},
          {"pattern_table", pattern_table.string()},
          {"generator", gen_config_to_json(generator)},
          {"principal_id", principal_id},
          {"health_cadence_s", health_cadence_s},
          {"snapshot_cadence_s", snapshot_cadence_s},
          {"boot_timeout_s", boot_timeout_s},
          {"boot_retries", boot_retries},
          {"verify_attempts", verify_attempts},
          {"max_verified_candidates", max_verified_candidates},
          {"heartbeat_period_s", heartbeat_period_s}};
}

namespace {

struct SessionResult {
  nlohmann::json session_json;
  std::vector<CrashCandidate> candidates;
  std::vector<InputRecord> records;
  std::filesystem::path dir;
  uint64_t execs = 0;
};

// Drives one API session: fresh instrumented instance + generator process +
// monitor cadence until budget or first candidate.
SessionResult run_session(const ApiRef& api, double budget_s,
                          const WorkerConfig& config,
                          const std::filesystem::path& session_dir,
                          const PatternTable& patterns,
                          const HeartbeatFn& heartbeat, uint32_t* instances) {
  SessionResult out;
  out.dir = session_dir;
  std::filesystem::create_directories(session_dir);

  heartbeat(WorkerState::kBooting, 0, *instances);
  InstanceOptions inst_opts;
  inst_opts.target_binary = config.target_binary;
  inst_opts.manifest = config.manifest;
  inst_opts.work_dir = session_dir;
  inst_opts.log_path = session_dir / "target.log";
  inst_opts.boot_timeout_s = config.boot_timeout_s;
  inst_opts.boot_retries = config.boot_retries;
  InstanceHandle inst = fresh_instance(InstanceFlavor::kInstrumented, inst_opts);
  ++*instances;

  // Typed generators only cover the API groups they can encode: byte-level
  // fuzzing needs a primitive descriptor, typed generation needs any
  // descriptor. Unsupported combinations fall back to random payloads, the
  // one generator that can hit every API.
  GenKind kind = config.generator.kind;
  std::string fallback_reason;
  if (kind != GenKind::kRandFuzz) {
    const ApiDescriptor* desc = nullptr;
    Surface surface;
    if (!config.surface.empty()) {
      surface = load_surface(config.surface);
      desc = surface.find(api.service, api.txn_id);
    }
    if (!desc) {
      fallback_reason = "api descriptor unavailable";
    } else if ((kind == GenKind::kByteFuzzBB || kind == GenKind::kByteFuzzEvo) &&
               desc->group != ApiGroup::kPrimitive) {
      fallback_reason = "byte fuzzing needs a primitive-group API";
    }
    if (!fallback_reason.empty()) kind = GenKind::kRandFuzz;
  }

  // Generator subprocess; it owns inputs.jsonl and coverage.bin.
  std::vector<std::string> argv = {
      config.target_binary.string(), "gen", "run",
      "--kind", gen_kind_name(kind),
      "--seed", std::to_string(config.generator.seed),
      "--budget-s", std::to_string(budget_s),
      "--api", api.service + ":" + std::to_string(api.txn_id),
      "--endpoint", inst.endpoint,
      "--out", session_dir.string(),
      "--principal", std::to_string(config.principal_id),
      "--max-payload", std::to_string(config.generator.max_payload),
      "--population", std::to_string(config.generator.population),
      "--havoc-cycles", std::to_string(config.generator.havoc_cycles),
  };
  if (inst.feedback_endpoint) {
    argv.push_back("--feedback-endpoint");
    argv.push_back(*inst.feedback_endpoint);
  }
  if (!config.surface.empty()) {
    argv.push_back("--surface");
    argv.push_back(config.surface.string());
  }
  SpawnOptions spawn_opts;
  spawn_opts.stderr_path = (session_dir / "gen.log").string();
  Child generator = spawn(argv, spawn_opts);

  // Monitor cadence.
  LogTail target_tail(session_dir / "target.log");
  LogTail input_tail(session_dir / "inputs.jsonl");
  LogClassifier classifier(patterns);
  SeqTimeline timeline;
  LivenessProbe::Options probe_opts;
  probe_opts.expect_feedback = true;
  LivenessProbe probe(inst.endpoint, probe_opts);
  LivenessLossDetector liveness_detector;
  int64_t last_companion_hb_us = 0;
  std::optional<int> gen_exit;
  int64_t gen_exit_at_ms = 0;
  bool have_fatal = false;
  nlohmann::json anomalies = nlohmann::json::array();

  const int64_t cadence_ms = static_cast<int64_t>(config.health_cadence_s * 1000);
  const int64_t snapshot_ms = static_cast<int64_t>(config.snapshot_cadence_s * 1000);
  const int64_t hard_deadline_ms =
      mono_ms() + static_cast<int64_t>(budget_s * 1000) + 60000;
  int64_t last_snapshot_ms = mono_ms();

  auto poll_tails = [&] {
    for (const auto& line : input_tail.read_new()) {
      auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded() || j.value("t", "") != "in") continue;
      timeline.add(j.value("ts", int64_t{0}), j.value("seq", uint64_t{0}));
      ++out.execs;
    }
    for (const auto& line : target_tail.read_new()) {
      if (line.find("ui: heartbeat") != std::string::npos) {
        last_companion_hb_us = now_us();
        continue;
      }
      auto cand = classifier.feed_line(line, now_us(), timeline);
      if (cand) {
        have_fatal = true;
        out.candidates.push_back(std::move(*cand));
      }
    }
  };

  heartbeat(WorkerState::kFuzzing, 0, *instances);
  for (;;) {
    poll_tails();
    if (!out.candidates.empty()) {
      // Potential finding: give trailing evidence one more beat, then stop.
      sleep_ms(300);
      poll_tails();
      break;
    }
    bool process_alive = inst.process.running();
    auto live = probe.probe(process_alive, last_companion_hb_us, now_us());
    auto lcand = liveness_detector.tick(live.dispatcher_dead() || !process_alive,
                                        have_fatal, now_us(), timeline);
    if (lcand) {
      out.candidates.push_back(std::move(*lcand));
      break;
    }
    if (!gen_exit) {
      gen_exit = generator.poll_exit();
      if (gen_exit) {
        gen_exit_at_ms = mono_ms();
        if (*gen_exit != 0)
          anomalies.push_back({{"kind", "generator_death"},
                               {"exit_code", *gen_exit}});
      }
    } else if (mono_ms() - gen_exit_at_ms > 5000) {
      break;  // generator finished its budget and nothing else is pending
    }
    if (mono_ms() >= hard_deadline_ms) break;
    if (mono_ms() - last_snapshot_ms >= snapshot_ms) {
      nlohmann::json snap;
      snap["ts_us"] = now_us();
      snap["execs"] = out.execs;
      snap["dispatcher"] = component_health_name(live.dispatcher);
      snap["companion"] = component_health_name(live.companion);
      snap["feedback"] = component_health_name(live.feedback);
      write_json_file(session_dir / "monitor.json", snap);
      last_snapshot_ms = mono_ms();
    }
    heartbeat(WorkerState::kFuzzing, out.execs, *instances);
    sleep_ms(cadence_ms);
  }

  // Snapshot & teardown: stop the generator first so it can flush its final
  // coverage map, then kill the target.
  heartbeat(WorkerState::kSnapshotting, out.execs, *instances);
  if (!gen_exit) generator.terminate(2000);
  poll_tails();
  teardown_instance(inst);
  poll_tails();

  out.candidates = merge_candidates(std::move(out.candidates));
  out.records = load_input_records(session_dir / "inputs.jsonl");

  nlohmann::json sj;
  sj["service"] = api.service;
  sj["txn_id"] = api.txn_id;
  sj["generator_kind"] = gen_kind_name(kind);
  if (!fallback_reason.empty()) sj["generator_fallback"] = fallback_reason;
  sj["execs"] = out.execs;
  sj["instance"] = {{"instance_id", inst.instance_id},
                    {"boot_nonce", inst.boot_nonce}};
  sj["anomalies"] = anomalies;
  auto stats = read_file_if_exists(session_dir / "gen_stats.json");
  if (stats) {
    auto j = nlohmann::json::parse(*stats, nullptr, false);
    if (!j.is_discarded()) {
      sj["gen_stats"] = j;
      if (j.contains("coverage_fraction"))
        sj["coverage"] = {{"distinct_blocks", j.value("distinct_blocks", 0u)},
                          {"block_universe", j.value("block_universe", 0u)},
                          {"fraction", j["coverage_fraction"]}};
    }
  }
  out.session_json = sj;
  return out;
}

}  // namespace

TaskRunResult run_task(const Task& task, const WorkerConfig& config,
                       const std::filesystem::path& artifact_dir,
                       const std::string& worker_id,
                       const HeartbeatFn& heartbeat) {
  TaskRunResult result;
  std::filesystem::create_directories(artifact_dir);
  PatternTable patterns = config.pattern_table.empty()
                              ? PatternTable::builtin()
                              : PatternTable::load(config.pattern_table);

  nlohmann::json report;
  report["task_id"] = task.task_id;
  report["worker_id"] = worker_id;
  report["analysis"] = analysis_kind_name(task.analysis);
  report["generator"] = {{"kind", gen_kind_name(config.generator.kind)},
                         {"seed", config.generator.seed}};
  report["principal_id"] = config.principal_id;
  report["started_us"] = now_us();
  auto sessions_json = nlohmann::json::array();
  auto findings_json = nlohmann::json::array();
  uint64_t execs_total = 0;
  uint32_t instances = 0;
  bool failed = false;

  double budget_per_api =
      task.api_refs.empty() ? 0.0 : task.budget_s / task.api_refs.size();

  for (size_t k = 0; k < task.api_refs.size(); ++k) {
    const auto& api = task.api_refs[k];
    std::filesystem::path session_dir =
        task.api_refs.size() == 1 ? artifact_dir
                                  : artifact_dir / ("api-" + std::to_string(k));
    SessionResult session;
    try {
      session = run_session(api, budget_per_api, config, session_dir, patterns,
                            heartbeat, &instances);
    } catch (const Error& e) {
      log_error("worker", "session failed", {{"api", api.service}, {"err", e.what()}});
      failed = true;
      sessions_json.push_back({{"service", api.service},
                               {"txn_id", api.txn_id},
                               {"error", e.what()}});
      break;
    }
    execs_total += session.execs;

    // Verification: replay each candidate's window on fresh vanilla
    // instances.
    heartbeat(WorkerState::kVerifying, execs_total, instances);
    VerifyOptions vopts;
    vopts.attempts = config.verify_attempts;
    vopts.instance.target_binary = config.target_binary;
    vopts.instance.manifest = config.manifest;
    vopts.instance.work_dir = session_dir / "verify";
    vopts.instance.boot_timeout_s = config.boot_timeout_s;
    vopts.instance.boot_retries = config.boot_retries;
    vopts.replay.principal_id = config.principal_id;

    size_t verified = 0;
    for (size_t ci = 0; ci < session.candidates.size(); ++ci) {
      const auto& cand = session.candidates[ci];
      nlohmann::json fj;
      std::string fid = "finding-" + std::to_string(k) + "-" + std::to_string(ci);
      fj["id"] = fid;
      fj["session"] = session_dir == artifact_dir
                          ? "."
                          : session_dir.filename().string();
      fj["class"] = crash_class_name(cand.crash_class);
      fj["candidate"] = cand.to_json();
      if (verified < config.max_verified_candidates) {
        ++verified;
        ReproResult repro = verify_candidate(cand, session.records, vopts);
        fj["verified"] = repro.outcome == ReproOutcome::kReproduced;
        fj["verify"] = repro.to_json();
        std::filesystem::path fdir = session_dir / "findings" / fid;
        std::filesystem::create_directories(fdir);
        write_json_file(fdir / "candidate.json", cand.to_json());
        write_json_file(fdir / "result.json", repro.to_json());
        if (!repro.reproducer.empty() &&
            repro.outcome != ReproOutcome::kFalsePositive) {
          write_records_jsonl(fdir / "repro.jsonl", repro.reproducer);
          const Pattern* pat = nullptr;
          for (const auto& p : patterns.patterns())
            if (p.crash_class == cand.crash_class) { pat = &p; break; }
          nlohmann::json expected;
          expected["class"] = crash_class_name(cand.crash_class);
          expected["pattern"] = pat ? pat->substring : "";
          write_json_file(fdir / "expected.json", expected);
          fj["reproducer"] = (fdir / "repro.jsonl").lexically_relative(artifact_dir).string();
        }
      } else {
        fj["verified"] = false;
        fj["verify"] = nullptr;
        fj["note"] = "verification budget exhausted";
      }
      findings_json.push_back(std::move(fj));
    }
    sessions_json.push_back(session.session_json);
    if (!session.candidates.empty()) break;  // one finding ends the task run
  }

  heartbeat(WorkerState::kReporting, execs_total, instances);
  report["sessions"] = sessions_json;
  report["findings"] = findings_json;
  report["execs_total"] = execs_total;
  report["instance_generation"] = instances;
  report["ended_us"] = now_us();
  report["status"] = failed ? "failed" : "done";
  write_json_file(artifact_dir / "report.json", report);

  result.done = !failed;
  result.report = std::move(report);
  return result;
}

int run_worker_main(const std::filesystem::path& config_path,
                    const std::filesystem::path& artifact_dir,
                    const std::string& worker_id) {
  WorkerConfig config = WorkerConfig::from_json(read_json_file(config_path));

  std::string stdin_text((std::istreambuf_iterator<char>(std::cin)),
                         std::istreambuf_iterator<char>());
  Task task = Task::from_json(nlohmann::json::parse(stdin_text));

  std::filesystem::create_directories(artifact_dir);
  struct Shared {
    std::mutex mu;
    WorkerHeartbeat hb;
  };
  auto shared = std::make_shared<Shared>();
  shared->hb.worker_id = worker_id;
  shared->hb.current_task = task.task_id;
  shared->hb.pid = getpid();
  std::atomic<bool> stop{false};

  std::thread hb_thread([shared, &stop, artifact_dir,
                         period = std::max(0.5, 2.0)] {
    while (!stop.load()) {
      {
        std::lock_guard<std::mutex> lk(shared->mu);
        shared->hb.heartbeat_at_us = now_us();
        write_heartbeat(artifact_dir / "heartbeat.json", shared->hb);
      }
      sleep_ms(static_cast<int64_t>(period * 1000));
    }
  });

  HeartbeatFn hb_fn = [shared](WorkerState st, uint64_t execs, uint32_t inst) {
    std::lock_guard<std::mutex> lk(shared->mu);
    shared->hb.state = st;
    shared->hb.execs_done = execs;
    shared->hb.instance_generation = inst;
  };

  int exit_code = 0;
  try {
    TaskRunResult res = run_task(task, config, artifact_dir, worker_id, hb_fn);
    exit_code = res.done ? 0 : 1;
  } catch (const std::exception& e) {
    log_error("worker", "task aborted", {{"err", e.what()}});
    exit_code = 1;
  }
  {
    std::lock_guard<std::mutex> lk(shared->mu);
    shared->hb.state = WorkerState::kIdle;
  }
  stop.store(true);
  hb_thread.join();
  {
    std::lock_guard<std::mutex> lk(shared->mu);
    shared->hb.heartbeat_at_us = now_us();
    write_heartbeat(artifact_dir / "heartbeat.json", shared->hb);
  }
  return exit_code;
}

}  // namespace anthill
