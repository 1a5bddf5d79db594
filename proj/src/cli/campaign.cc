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

#include "cli/campaign.h"

#include <algorithm>
#include <set>

#include "analyzer/analyzer.h"
#include "backend/http.h"
#include "cli/cli.h"
#include "common/clock.h"
#include "common/error.h"
#include "common/fs.h"
#include "common/hash.h"
#include "common/logging.h"
#include "common/proc.h"
#include "surface/surface.h"
#include "troop/troop.h"

namespace anthill {

namespace {

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> keys,
                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known |= (it.key() == k);
    if (!known)
      throw Error(ErrorKind::kConfig,
                  "unknown key '" + it.key() + "' in " + where);
  }
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

CampaignOutcome run_campaign(const nlohmann::json& config,
                             const std::filesystem::path& config_dir) {
  check_keys(config,
             {"manifest", "artifact_root", "backend", "analysis", "generator",
              "generators", "workers", "tasks", "principal", "seed",
              "reference_map", "require_classes", "require_heuristic_classes",
              "campaign_timeout_s", "worker"},
             "campaign config");

  CampaignOutcome outcome;
  std::filesystem::path manifest_path =
      resolve(config_dir, config.at("manifest").get<std::string>());
  Manifest manifest = load_manifest(manifest_path);
  std::filesystem::path artifact_root =
      resolve(config_dir, config.at("artifact_root").get<std::string>());
  std::filesystem::create_directories(artifact_root);

  auto analysis = analysis_kind_from_name(config.value("analysis", "vuln_hunt"));
  if (!analysis) throw Error(ErrorKind::kConfig, "unknown analysis kind");
  uint32_t principal = config.value("principal", 0u);
  uint64_t base_seed = config.value("seed", uint64_t{1});

  // Surface export drives task construction and later analysis.
  Surface surface = surface_from_manifest(manifest);
  write_surface(artifact_root / "surface.json", surface);

  // Backend.
  nlohmann::json backend_cfg = config.value("backend", nlohmann::json::object());
  check_keys(backend_cfg, {"port", "event_log"}, "campaign backend config");
  BackendOptions backend_opts;
  backend_opts.port = backend_cfg.value("port", 0);
  backend_opts.event_log =
      backend_cfg.contains("event_log")
          ? resolve(config_dir, backend_cfg["event_log"].get<std::string>())
          : artifact_root / "backend-events.jsonl";
  BackendService backend(backend_opts);
  backend.start();

  // Task construction from the surface partition.
  nlohmann::json tasks_cfg = config.value("tasks", nlohmann::json::object());
  check_keys(tasks_cfg,
             {"group", "services", "apis", "only_faulted", "budget_s",
              "budget_execs"},
             "campaign tasks config");
  std::string group = tasks_cfg.value("group", "primitive");
  double task_budget = tasks_cfg.value("budget_s", 60.0);
  bool only_faulted = tasks_cfg.value("only_faulted", false);
  std::set<std::string> service_filter;
  for (const auto& s : tasks_cfg.value("services", nlohmann::json::array()))
    service_filter.insert(s.get<std::string>());
  std::set<std::string> api_filter;
  for (const auto& s : tasks_cfg.value("apis", nlohmann::json::array()))
    api_filter.insert(s.get<std::string>());

  Partition part = partition(surface);
  std::vector<ApiDescriptor> selected;
  if (group == "primitive" || group == "all")
    selected.insert(selected.end(), part.primitive.begin(), part.primitive.end());
  if (group == "complex" || group == "all")
    selected.insert(selected.end(), part.complex_group.begin(),
                    part.complex_group.end());
  if (group != "primitive" && group != "complex" && group != "all")
    throw Error(ErrorKind::kConfig, "tasks.group must be primitive|complex|all");

  std::vector<Task> tasks;
  for (const auto& api : selected) {
    if (!service_filter.empty() && !service_filter.count(api.service_name))
      continue;
    if (!api_filter.empty() && !api_filter.count(api.key())) continue;
    if (only_faulted) {
      const MethodSpec* m = manifest.find_method(api.service_name, api.txn_id);
      if (!m || !m->fault) continue;
    }
    Task t;
    t.task_id = "t-" + api.service_name + "-" + std::to_string(api.txn_id);
    t.api_refs.push_back({api.service_name, api.txn_id});
    t.analysis = *analysis;
    t.budget_s = task_budget;
    tasks.push_back(std::move(t));
  }
  if (tasks.empty())
    throw Error(ErrorKind::kConfig, "campaign task selection is empty");

  BackendClient client(backend.base_url());
  size_t ingested = client.ingest(tasks);
  log_info("campaign", "ingested tasks", {{"count", ingested}});

  // One troop per generator configuration.
  std::vector<nlohmann::json> generators;
  if (config.contains("generators"))
    for (const auto& g : config["generators"]) generators.push_back(g);
  else
    generators.push_back(config.value("generator", nlohmann::json{{"kind", "randfuzz"}}));
  int workers_per_troop = config.value("workers", 2);

  std::vector<Child> troops;
  for (size_t gi = 0; gi < generators.size(); ++gi) {
    nlohmann::json gen_cfg = generators[gi];
    if (!gen_cfg.contains("seed"))
      gen_cfg["seed"] = base_seed + gi;  // deterministic per-troop seeds
    std::string gen_name = gen_cfg.value("kind", "randfuzz");

    nlohmann::json worker_cfg = config.value("worker", nlohmann::json::object());
    worker_cfg["manifest"] = manifest_path.string();
    worker_cfg["surface"] = (artifact_root / "surface.json").string();
    worker_cfg["generator"] = gen_cfg;
    worker_cfg["principal_id"] = principal;

    nlohmann::json troop_cfg;
    troop_cfg["backend_url"] = backend.base_url();
    troop_cfg["workers"] = workers_per_troop;
    troop_cfg["artifact_root"] =
        (artifact_root / ("troop-" + std::to_string(gi) + "-" + gen_name)).string();
    troop_cfg["analysis"] = analysis_kind_name(*analysis);
    troop_cfg["worker"] = worker_cfg;
    troop_cfg["client_id"] = "troop-" + std::to_string(gi) + "-" + gen_name;

    std::filesystem::path cfg_path =
        artifact_root / ("troop-" + std::to_string(gi) + ".json");
    write_json_file(cfg_path, troop_cfg);
    troops.push_back(spawn({self_exe_path(), "troop", "run", "--config",
                            cfg_path.string()}));
  }

  // Wait for task exhaustion.
  double default_timeout =
      120.0 + 2.0 * task_budget * static_cast<double>(tasks.size()) /
                  std::max(1, workers_per_troop * static_cast<int>(generators.size()));
  double timeout_s = config.value("campaign_timeout_s", default_timeout);
  int64_t deadline = mono_ms() + static_cast<int64_t>(timeout_s * 1000);
  bool exhausted = false;
  while (mono_ms() < deadline) {
    auto all = client.list(std::nullopt);
    size_t finished = 0;
    for (const auto& t : all)
      finished += (t.status == TaskStatus::kDone || t.status == TaskStatus::kFailed);
    if (finished == all.size() && !all.empty()) {
      exhausted = true;
      break;
    }
    sleep_ms(1000);
  }
  for (auto& t : troops) t.terminate(3000);
  if (!exhausted)
    log_warn("campaign", "timeout before task exhaustion", {{"timeout_s", timeout_s}});

  // Analysis.
  ScanResult scan = analyzer_scan(artifact_root, PatternTable::builtin());
  nlohmann::json report;
  report["tasks"] = {{"total", tasks.size()}, {"exhausted", exhausted}};
  auto counts = backend.store().status_counts();
  report["task_counts"] = counts;
  report["finding_groups"] = scan.finding_groups;
  report["sessions"] = scan.sessions.size();

  if (config.contains("reference_map")) {
    PermissionMap observed = build_permission_map(scan.sessions, surface);
    PermissionMap reference = load_reference_map(
        resolve(config_dir, config["reference_map"].get<std::string>()));
    MapDiff diff = diff_permission_map(observed, reference, "reference");
    report["permission_map"] = observed.to_json();
    report["permission_diff"] = diff.to_json();
  }

  // Acceptance evaluation: required classes must appear among verified
  // findings (or heuristic ones for the heuristic list).
  auto has_group = [&](const std::string& cls, bool verified_only) {
    if (!scan.finding_groups.contains(cls)) return false;
    for (const auto& [api, g] : scan.finding_groups[cls].items()) {
      (void)api;
      if (!verified_only || g.value("verified", 0) > 0) return true;
    }
    return false;
  };
  nlohmann::json missing = nlohmann::json::array();
  for (const auto& cls : config.value("require_classes", nlohmann::json::array()))
    if (!has_group(cls.get<std::string>(), true)) missing.push_back(cls);
  for (const auto& cls :
       config.value("require_heuristic_classes", nlohmann::json::array()))
    if (!has_group(cls.get<std::string>(), false)) missing.push_back(cls);
  report["missing_required_classes"] = missing;

  outcome.exit_code = kExitOk;
  if (!exhausted || counts["failed"] > 0)
    outcome.exit_code = counts["done"] > 0 ? kExitOk : kExitInfra;
  if (!missing.empty()) outcome.exit_code = kExitAcceptance;
  report["exit_code"] = outcome.exit_code;
  write_json_file(artifact_root / "campaign_report.json", report);
  outcome.report = std::move(report);
  backend.stop();
  return outcome;
}

}  // namespace anthill
