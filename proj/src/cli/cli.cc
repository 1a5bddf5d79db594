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

#include "cli/cli.h"

#include <signal.h>

#include <atomic>
#include <iostream>

#include "CLI11.hpp"

#include "analyzer/analyzer.h"
#include "backend/http.h"
#include "cli/campaign.h"
#include "common/clock.h"
#include "common/error.h"
#include "common/fs.h"
#include "common/logging.h"
#include "common/proc.h"
#include "gen/runner.h"
#include "sim/client.h"
#include "sim/server.h"
#include "surface/surface.h"
#include "troop/troop.h"
#include "verify/verify.h"
#include "worker/worker.h"

namespace anthill {

namespace {

std::atomic<bool> g_stop{false};

std::pair<std::string, uint32_t> parse_api_ref(const std::string& s) {
  auto pos = s.rfind(':');
  if (pos == std::string::npos || pos == 0)
    throw Error(ErrorKind::kConfig, "--api must be service:txn, got '" + s + "'");
  return {s.substr(0, pos), static_cast<uint32_t>(std::stoul(s.substr(pos + 1)))};
}

int cmd_backend_serve(uint16_t port, const std::string& log_path) {
  BackendOptions opts;
  opts.port = port;
  opts.event_log = log_path;
  BackendService service(opts);
  service.start();
  printf("{\"port\": %u}\n", service.port());
  fflush(stdout);
  signal(SIGTERM, +[](int) { g_stop.store(true); });
  signal(SIGINT, +[](int) { g_stop.store(true); });
  while (!g_stop.load()) sleep_ms(200);
  service.stop();
  return kExitOk;
}

int cmd_backend_audit(const std::string& log_path) {
  AuditResult res = audit_event_log(log_path);
  nlohmann::json j;
  j["ok"] = res.ok;
  j["events"] = res.events;
  j["violations"] = res.violations;
  j["claims_per_task"] = res.claims_per_task;
  printf("%s\n", j.dump(2).c_str());
  return res.ok ? kExitOk : 1;
}

int cmd_surface_map(const std::string& static_path, const std::string& endpoint,
                    const std::string& out) {
  Surface s;
  if (!static_path.empty())
    s = map_static(static_path);
  else if (!endpoint.empty())
    s = map_dynamic(endpoint);
  else
    throw Error(ErrorKind::kConfig, "surface map needs --static or --dynamic");
  nlohmann::json j = surface_to_json(s);
  if (out.empty())
    printf("%s\n", j.dump(2).c_str());
  else
    write_json_file(out, j);
  return kExitOk;
}

int cmd_surface_ground_truth(const std::string& manifest_path,
                             const std::string& endpoint, const std::string& out) {
  nlohmann::json j;
  if (!manifest_path.empty()) {
    Manifest m = load_manifest(manifest_path);
    j["target_fingerprint"] = m.fingerprint();
    nlohmann::json perms = nlohmann::json::object();
    for (const auto& [api, names] : m.ground_truth_permissions()) perms[api] = names;
    j["permissions"] = perms;
  } else if (!endpoint.empty()) {
    SimClient client(endpoint);
    auto gt = client.ground_truth(2000);
    if (!gt) throw Error(ErrorKind::kRetryable, "ground truth export failed");
    j = *gt;
  } else {
    throw Error(ErrorKind::kConfig, "ground-truth needs --manifest or --endpoint");
  }
  if (out.empty())
    printf("%s\n", j.dump(2).c_str());
  else
    write_json_file(out, j);
  return kExitOk;
}

int cmd_tasks_ingest(const std::string& backend_url, const std::string& file,
                     const std::string& from_surface, const std::string& group,
                     const std::string& analysis, double budget_s) {
  std::vector<Task> tasks;
  if (!file.empty()) {
    auto doc = read_json_file(file);
    const auto& arr = doc.is_array() ? doc : doc.at("tasks");
    for (const auto& tj : arr) tasks.push_back(Task::from_json(tj));
  } else if (!from_surface.empty()) {
    Surface s = load_surface(from_surface);
    Partition part = partition(s);
    auto kind = analysis_kind_from_name(analysis);
    if (!kind) throw Error(ErrorKind::kConfig, "unknown --analysis");
    std::vector<ApiDescriptor> apis;
    if (group == "primitive" || group == "all")
      apis.insert(apis.end(), part.primitive.begin(), part.primitive.end());
    if (group == "complex" || group == "all")
      apis.insert(apis.end(), part.complex_group.begin(), part.complex_group.end());
    if (apis.empty() && group != "primitive" && group != "complex" && group != "all")
      throw Error(ErrorKind::kConfig, "--group must be primitive|complex|all");
    for (const auto& api : apis) {
      Task t;
      t.task_id = "t-" + api.service_name + "-" + std::to_string(api.txn_id);
      t.api_refs.push_back({api.service_name, api.txn_id});
      t.analysis = *kind;
      t.budget_s = budget_s;
      tasks.push_back(std::move(t));
    }
  } else {
    throw Error(ErrorKind::kConfig, "tasks ingest needs --file or --from-surface");
  }
  BackendClient client(backend_url);
  size_t n = client.ingest(tasks);
  printf("{\"ingested\": %zu}\n", n);
  return kExitOk;
}

int cmd_gen_run(const std::string& kind, uint64_t seed, double budget_s,
                int64_t budget_execs, const std::string& api,
                const std::string& endpoint, const std::string& feedback_endpoint,
                const std::string& surface_path, const std::string& out_dir,
                uint32_t principal, uint32_t max_payload, uint32_t population,
                uint32_t havoc_cycles) {
  GenRunnerOptions opts;
  auto k = gen_kind_from_name(kind);
  if (!k) throw Error(ErrorKind::kConfig, "unknown generator kind '" + kind + "'");
  opts.config.kind = *k;
  opts.config.seed = seed;
  opts.config.max_payload = max_payload;
  opts.config.population = population;
  opts.config.havoc_cycles = havoc_cycles;
  auto [service, txn] = parse_api_ref(api);
  opts.service = service;
  opts.txn_id = txn;
  opts.endpoint = endpoint;
  if (!feedback_endpoint.empty()) opts.feedback_endpoint = feedback_endpoint;
  opts.principal_id = principal;
  opts.budget_s = budget_s;
  if (budget_execs >= 0) opts.budget_execs = static_cast<uint64_t>(budget_execs);
  opts.out_dir = out_dir;
  if (!surface_path.empty()) {
    Surface s = load_surface(surface_path);
    const ApiDescriptor* d = s.find(service, txn);
    if (d) opts.descriptor = *d;
  }
  if (!opts.descriptor && *k != GenKind::kRandFuzz)
    throw Error(ErrorKind::kConfig,
                "typed generators need --surface with the target API");
  return run_generator_session(opts);
}

int cmd_replay(const std::string& manifest, const std::string& inputs,
               const std::string& expect_class, const std::string& coverage_check,
               const std::string& work_dir, uint32_t principal) {
  auto records = load_input_records(inputs);
  InstanceOptions inst_opts;
  inst_opts.target_binary = self_exe_path();
  inst_opts.manifest = manifest;
  inst_opts.work_dir = work_dir.empty() ? make_temp_dir("anthill-replay")
                                        : std::filesystem::path(work_dir);
  inst_opts.log_path = inst_opts.work_dir / "replay-target.log";
  ReplayOptions ropts;
  ropts.principal_id = principal;

  if (!coverage_check.empty()) {
    InstanceHandle inst = fresh_instance(InstanceFlavor::kInstrumented, inst_opts);
    auto replayed = replay_coverage(inst, records, ropts);
    teardown_instance(inst);
    auto recorded = read_coverage_file(coverage_check);
    if (!replayed || !recorded)
      throw Error(ErrorKind::kInfra, "coverage map missing or unreadable");
    bool equal = *replayed == *recorded;
    printf("{\"coverage_identical\": %s}\n", equal ? "true" : "false");
    return equal ? kExitOk : 1;
  }

  InstanceHandle inst = fresh_instance(InstanceFlavor::kVanilla, inst_opts);
  ReplaySignals signals =
      replay_records(inst, records, PatternTable::builtin(), ropts);
  teardown_instance(inst);
  nlohmann::json j;
  j["sent"] = signals.sent;
  j["responded"] = signals.responded;
  j["process_exited"] = signals.process_exited;
  auto classes = nlohmann::json::array();
  for (auto c : signals.classes()) classes.push_back(crash_class_name(c));
  j["classes"] = classes;
  j["pattern_ids"] = signals.pattern_ids;
  printf("%s\n", j.dump(2).c_str());
  if (!expect_class.empty()) {
    auto cls = crash_class_from_name(expect_class);
    if (!cls) throw Error(ErrorKind::kConfig, "unknown --expect-class");
    return signals.has_class(*cls) ? kExitOk : 1;
  }
  return kExitOk;
}

int cmd_minify(const std::string& manifest, const std::string& inputs,
               const std::string& expect_class, const std::string& out,
               uint32_t principal) {
  auto records = load_input_records(inputs);
  auto cls = crash_class_from_name(expect_class);
  if (!cls) throw Error(ErrorKind::kConfig, "unknown --expect-class");
  VerifyOptions vopts;
  vopts.instance.target_binary = self_exe_path();
  vopts.instance.manifest = manifest;
  vopts.instance.work_dir = make_temp_dir("anthill-minify");
  vopts.replay.principal_id = principal;
  size_t calls = 0;
  auto minimal = minify_records(records, make_replay_check(*cls, vopts), &calls);
  write_records_jsonl(out, minimal);
  printf("{\"original\": %zu, \"minimal\": %zu, \"check_calls\": %zu}\n",
         records.size(), minimal.size(), calls);
  return kExitOk;
}

int cmd_analyze(const std::string& op, const std::string& artifacts,
                const std::string& reference, const std::string& surface_path,
                const std::string& out, bool human) {
  PatternTable table = PatternTable::builtin();
  ScanResult scan = analyzer_scan(artifacts, table);
  nlohmann::json result;
  std::string text;

  if (op == "scan") {
    result = scan.to_json();
  } else if (op == "throughput") {
    ThroughputStats stats = throughput_stats(scan.sessions);
    result = stats.to_json();
    text = render_throughput_table(stats);
  } else if (op == "coverage") {
    CoverageStats stats = coverage_stats(scan.sessions);
    result = stats.to_json();
    text = render_coverage_table(stats);
  } else if (op == "permmap" || op == "diff") {
    std::filesystem::path spath = surface_path.empty()
                                      ? std::filesystem::path(artifacts) / "surface.json"
                                      : std::filesystem::path(surface_path);
    Surface surface = load_surface(spath);
    PermissionMap observed = build_permission_map(scan.sessions, surface);
    if (op == "permmap") {
      result = observed.to_json();
    } else {
      if (reference.empty())
        throw Error(ErrorKind::kConfig, "diff needs --reference");
      MapDiff diff = diff_permission_map(observed, load_reference_map(reference),
                                         std::filesystem::path(reference).filename());
      result = diff.to_json();
      text = render_diff_table(diff);
    }
  } else {
    throw Error(ErrorKind::kConfig,
                "analyze op must be scan|throughput|coverage|permmap|diff");
  }

  if (!out.empty()) write_json_file(out, result);
  if (human && !text.empty())
    printf("%s", text.c_str());
  else
    printf("%s\n", result.dump(2).c_str());
  return kExitOk;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"anthill: distributed dynamic analysis platform for stateful "
               "multi-API middleware"};
  app.require_subcommand(1);
  bool human = false;
  app.add_flag("--human", human, "human-readable log output");

  // backend
  auto* backend = app.add_subcommand("backend", "task backend");
  auto* backend_serve = backend->add_subcommand("serve", "serve the task REST API");
  uint16_t backend_port = 0;
  std::string backend_log = "backend-events.jsonl";
  backend_serve->add_option("--port", backend_port, "port (0 = ephemeral)");
  backend_serve->add_option("--log", backend_log, "event log path");
  auto* backend_audit = backend->add_subcommand("audit", "audit an event log");
  std::string audit_log;
  backend_audit->add_option("--log", audit_log, "event log path")->required();

  // troop
  auto* troop = app.add_subcommand("troop", "worker orchestrator");
  auto* troop_run = troop->add_subcommand("run", "run the supervision loop");
  std::string troop_cfg;
  troop_run->add_option("--config", troop_cfg, "troop config JSON")->required();

  // worker
  auto* worker = app.add_subcommand("worker", "task worker");
  auto* worker_run = worker->add_subcommand("run", "run one task (JSON on stdin)");
  std::string worker_cfg, worker_dir, worker_id = "worker-0";
  worker_run->add_option("--config", worker_cfg)->required();
  worker_run->add_option("--artifact-dir", worker_dir)->required();
  worker_run->add_option("--worker-id", worker_id);

  // target
  auto* target = app.add_subcommand("target", "reference target simulator");
  auto* target_serve = target->add_subcommand("serve", "serve the target");
  SimServerOptions sim_opts;
  std::string sim_manifest, sim_log = "target.log", sim_ready;
  uint16_t sim_port = 0;
  int64_t sim_feedback_port = -1;
  uint64_t sim_nonce = 0;
  bool no_companion = false;
  target_serve->add_option("--manifest", sim_manifest)->required();
  target_serve->add_option("--port", sim_port);
  target_serve->add_option("--feedback-port", sim_feedback_port,
                           "enable instrumentation (0 = ephemeral)");
  target_serve->add_option("--log", sim_log);
  target_serve->add_option("--ready-file", sim_ready);
  target_serve->add_option("--boot-nonce", sim_nonce);
  target_serve->add_flag("--no-companion", no_companion);

  // surface
  auto* surface = app.add_subcommand("surface", "attack surface mapping");
  auto* surface_map = surface->add_subcommand("map", "map the surface");
  std::string surf_static, surf_dynamic, surf_out;
  surface_map->add_option("--static", surf_static, "manifest path");
  surface_map->add_option("--dynamic", surf_dynamic, "target endpoint host:port");
  surface_map->add_option("--out", surf_out);
  auto* surface_gt = surface->add_subcommand("ground-truth",
                                             "export the permission ground truth");
  std::string gt_manifest, gt_endpoint, gt_out;
  surface_gt->add_option("--manifest", gt_manifest);
  surface_gt->add_option("--endpoint", gt_endpoint);
  surface_gt->add_option("--out", gt_out);

  // tasks
  auto* tasks = app.add_subcommand("tasks", "task management");
  auto* tasks_ingest = tasks->add_subcommand("ingest", "ingest tasks");
  std::string ti_backend, ti_file, ti_surface, ti_group = "primitive",
              ti_analysis = "vuln_hunt";
  double ti_budget = 60.0;
  tasks_ingest->add_option("--backend", ti_backend)->required();
  tasks_ingest->add_option("--file", ti_file);
  tasks_ingest->add_option("--from-surface", ti_surface);
  tasks_ingest->add_option("--group", ti_group);
  tasks_ingest->add_option("--analysis", ti_analysis);
  tasks_ingest->add_option("--budget-s", ti_budget);

  // gen
  auto* gen = app.add_subcommand("gen", "input generators");
  auto* gen_run = gen->add_subcommand("run", "run a generation session");
  std::string gr_kind = "randfuzz", gr_api, gr_endpoint, gr_feedback, gr_surface,
              gr_out = ".";
  uint64_t gr_seed = 1;
  double gr_budget = 60.0;
  int64_t gr_execs = -1;
  uint32_t gr_principal = 0, gr_max_payload = 4096, gr_population = 50,
           gr_havoc = 256;
  gen_run->add_option("--kind", gr_kind);
  gen_run->add_option("--seed", gr_seed);
  gen_run->add_option("--budget-s", gr_budget);
  gen_run->add_option("--budget-execs", gr_execs);
  gen_run->add_option("--api", gr_api)->required();
  gen_run->add_option("--endpoint", gr_endpoint)->required();
  gen_run->add_option("--feedback-endpoint", gr_feedback);
  gen_run->add_option("--surface", gr_surface);
  gen_run->add_option("--out", gr_out);
  gen_run->add_option("--principal", gr_principal);
  gen_run->add_option("--max-payload", gr_max_payload);
  gen_run->add_option("--population", gr_population);
  gen_run->add_option("--havoc-cycles", gr_havoc);

  // replay / minify
  auto* replay = app.add_subcommand("replay", "replay persisted inputs");
  std::string rp_manifest, rp_inputs, rp_expect, rp_coverage, rp_workdir;
  uint32_t rp_principal = 0;
  replay->add_option("--manifest", rp_manifest)->required();
  replay->add_option("--inputs", rp_inputs)->required();
  replay->add_option("--expect-class", rp_expect);
  replay->add_option("--coverage-check", rp_coverage,
                     "compare against a recorded coverage.bin");
  replay->add_option("--work-dir", rp_workdir);
  replay->add_option("--principal", rp_principal);

  auto* minify = app.add_subcommand("minify", "ddmin a reproducer");
  std::string mf_manifest, mf_inputs, mf_expect, mf_out = "minimal.jsonl";
  uint32_t mf_principal = 0;
  minify->add_option("--manifest", mf_manifest)->required();
  minify->add_option("--inputs", mf_inputs)->required();
  minify->add_option("--expect-class", mf_expect)->required();
  minify->add_option("--out", mf_out);
  minify->add_option("--principal", mf_principal);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "result analysis");
  std::string an_op, an_artifacts, an_reference, an_surface, an_out;
  analyze->add_option("op", an_op, "scan|throughput|coverage|permmap|diff")
      ->required();
  analyze->add_option("--artifacts", an_artifacts)->required();
  analyze->add_option("--reference", an_reference);
  analyze->add_option("--surface", an_surface);
  analyze->add_option("--out", an_out);

  // campaign
  auto* campaign = app.add_subcommand("campaign", "one-shot campaign");
  auto* campaign_run = campaign->add_subcommand("run", "run a campaign config");
  std::string camp_cfg;
  campaign_run->add_option("--config", camp_cfg)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  log_set_human(human);

  try {
    if (backend_serve->parsed()) return cmd_backend_serve(backend_port, backend_log);
    if (backend_audit->parsed()) return cmd_backend_audit(audit_log);
    if (troop_run->parsed()) {
      TroopConfig cfg = TroopConfig::from_json(read_json_file(troop_cfg));
      static std::atomic<bool> stop{false};
      signal(SIGTERM, +[](int) { stop.store(true); });
      signal(SIGINT, +[](int) { stop.store(true); });
      return run_troop(cfg, stop);
    }
    if (worker_run->parsed())
      return run_worker_main(worker_cfg, worker_dir, worker_id);
    if (target_serve->parsed()) {
      sim_opts.manifest_path = sim_manifest;
      sim_opts.port = sim_port;
      if (sim_feedback_port >= 0) {
        sim_opts.instrument = true;
        sim_opts.feedback_port = static_cast<uint16_t>(sim_feedback_port);
      }
      sim_opts.log_path = sim_log;
      sim_opts.ready_file = sim_ready;
      sim_opts.boot_nonce = sim_nonce;
      sim_opts.companion = !no_companion;
      return run_sim_server(sim_opts);
    }
    if (surface_map->parsed())
      return cmd_surface_map(surf_static, surf_dynamic, surf_out);
    if (surface_gt->parsed())
      return cmd_surface_ground_truth(gt_manifest, gt_endpoint, gt_out);
    if (tasks_ingest->parsed())
      return cmd_tasks_ingest(ti_backend, ti_file, ti_surface, ti_group,
                              ti_analysis, ti_budget);
    if (gen_run->parsed())
      return cmd_gen_run(gr_kind, gr_seed, gr_budget, gr_execs, gr_api,
                         gr_endpoint, gr_feedback, gr_surface, gr_out,
                         gr_principal, gr_max_payload, gr_population, gr_havoc);
    if (replay->parsed())
      return cmd_replay(rp_manifest, rp_inputs, rp_expect, rp_coverage,
                        rp_workdir, rp_principal);
    if (minify->parsed())
      return cmd_minify(mf_manifest, mf_inputs, mf_expect, mf_out, mf_principal);
    if (analyze->parsed())
      return cmd_analyze(an_op, an_artifacts, an_reference, an_surface, an_out,
                         human);
    if (campaign_run->parsed()) {
      auto doc = read_json_file(camp_cfg);
      auto outcome = run_campaign(
          doc, std::filesystem::absolute(camp_cfg).parent_path());
      printf("%s\n", outcome.report.dump(2).c_str());
      return outcome.exit_code;
    }
  } catch (const Error& e) {
    log_error("cli", e.what(), {{"kind", error_kind_name(e.kind())}});
    switch (e.kind()) {
      case ErrorKind::kConfig:
      case ErrorKind::kValidation:
        return kExitConfig;
      default:
        return kExitInfra;
    }
  } catch (const std::exception& e) {
    log_error("cli", e.what());
    return kExitInfra;
  }
  return kExitConfig;
}

}  // namespace anthill
