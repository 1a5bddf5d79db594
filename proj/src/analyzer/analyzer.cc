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

#include "analyzer/analyzer.h"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "common/fs.h"
#include "monitors/classify.h"

namespace anthill {

namespace {

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

double trimmed_mean_of(std::vector<double> v, double trim = 0.05) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  size_t cut = static_cast<size_t>(static_cast<double>(v.size()) * trim);
  if (v.size() <= 2 * cut) return mean_of(v);
  return mean_of(std::vector<double>(v.begin() + cut, v.end() - cut));
}

std::string api_key(const std::string& service, uint32_t txn) {
  return service + ":" + std::to_string(txn);
}

}  // namespace

nlohmann::json ScanResult::to_json() const {
  nlohmann::json j;
  auto sess = nlohmann::json::array();
  for (const auto& s : sessions)
    sess.push_back({{"dir", s.dir.string()}, {"task_id", s.task_id}});
  j["sessions"] = sess;
  j["findings"] = findings;
  j["finding_groups"] = finding_groups;
  j["malformed"] = malformed;
  return j;
}

ScanResult analyzer_scan(const std::filesystem::path& artifact_root,
                         const PatternTable& patterns) {
  ScanResult out;
  if (!std::filesystem::exists(artifact_root)) return out;

  // Sessions are directories holding a report.json.
  std::vector<std::filesystem::path> report_files;
  for (auto it = std::filesystem::recursive_directory_iterator(artifact_root);
       it != std::filesystem::recursive_directory_iterator(); ++it) {
    if (it->is_regular_file() && it->path().filename() == "report.json")
      report_files.push_back(it->path());
  }
  std::sort(report_files.begin(), report_files.end());

  std::map<std::string, std::map<std::string, nlohmann::json>> groups;

  for (const auto& rf : report_files) {
    SessionRef ref;
    ref.dir = rf.parent_path();
    try {
      ref.report = read_json_file(rf);
    } catch (const std::exception& e) {
      out.malformed.push_back(rf.string() + ": " + e.what());
      continue;
    }
    ref.task_id = ref.report.value("task_id", "");

    // Worker-reported findings, dedup within the session.
    std::vector<CrashCandidate> session_cands;
    std::map<std::string, nlohmann::json> by_candidate;
    for (const auto& fj : ref.report.value("findings", nlohmann::json::array())) {
      if (!fj.contains("candidate")) continue;
      auto cand = CrashCandidate::from_json(fj["candidate"]);
      if (!cand) continue;
      session_cands.push_back(*cand);
      by_candidate[std::string(crash_class_name(cand->crash_class)) + "@" +
                   std::to_string(cand->window_first_seq)] = fj;
    }
    auto merged = merge_candidates(session_cands);

    std::string api;
    const auto& sessions_j = ref.report.value("sessions", nlohmann::json::array());
    if (!sessions_j.empty() && sessions_j[0].contains("service"))
      api = api_key(sessions_j[0].value("service", ""),
                    sessions_j[0].value("txn_id", 0u));

    std::set<std::string> classes_reported;
    for (const auto& fj : ref.report.value("findings", nlohmann::json::array())) {
      nlohmann::json f = fj;
      f["task_id"] = ref.task_id;
      f["api"] = api;
      f["source"] = "worker";
      out.findings.push_back(f);
      std::string cls = fj.value("class", "");
      classes_reported.insert(cls);
      auto& g = groups[cls][api];
      if (!g.is_object())
        g = {{"count", 0}, {"verified", 0}, {"heuristic", 0}};
      g["count"] = g["count"].get<int>() + 1;
      if (fj.value("verified", false)) g["verified"] = g["verified"].get<int>() + 1;
    }
    (void)merged;
    (void)by_candidate;

    // Heuristic pass: re-classify the archived target log and surface
    // anything the worker did not report (the paper's analyzer found the
    // SystemUI crashes exactly this way).
    std::filesystem::path log_path = ref.dir / "target.log";
    if (std::filesystem::exists(log_path)) {
      std::vector<std::string> lines;
      std::ifstream in(log_path);
      std::string line;
      while (std::getline(in, line)) lines.push_back(line);
      LogClassifier classifier(patterns);
      SeqTimeline empty_timeline;
      auto cands = merge_candidates(classifier.classify_all(lines, empty_timeline));
      for (const auto& c : cands) {
        std::string cls = crash_class_name(c.crash_class);
        if (classes_reported.count(cls)) continue;
        nlohmann::json f;
        f["task_id"] = ref.task_id;
        f["api"] = api;
        f["class"] = cls;
        f["candidate"] = c.to_json();
        f["verified"] = false;
        f["source"] = "heuristic_scan";
        out.findings.push_back(f);
        auto& g = groups[cls][api];
        if (!g.is_object())
          g = {{"count", 0}, {"verified", 0}, {"heuristic", 0}};
        g["count"] = g["count"].get<int>() + 1;
        g["heuristic"] = g["heuristic"].get<int>() + 1;
      }
    }

    out.sessions.push_back(std::move(ref));
  }

  nlohmann::json groups_json = nlohmann::json::object();
  for (const auto& [cls, apis] : groups) {
    nlohmann::json m = nlohmann::json::object();
    for (const auto& [api, g] : apis) m[api] = g;
    groups_json[cls] = m;
  }
  out.finding_groups = groups_json;
  return out;
}

nlohmann::json ThroughputStats::to_json() const {
  nlohmann::json j;
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [api, s] : per_api)
    per[api] = {{"mean_ms", s.mean_ms},
                {"median_ms", s.median_ms},
                {"trimmed_mean_ms", s.trimmed_mean_ms},
                {"deltas", s.deltas}};
  j["per_api"] = per;
  j["aggregate"] = {{"mean_of_means", mean_of_means},
                    {"median_of_means", median_of_means},
                    {"mean_of_medians", mean_of_medians},
                    {"median_of_medians", median_of_medians}};
  j["excluded"] = excluded;
  return j;
}

ThroughputStats throughput_stats(const std::vector<SessionRef>& sessions) {
  ThroughputStats out;
  std::map<std::string, std::vector<double>> deltas_per_api;
  std::set<std::string> seen_apis;

  for (const auto& s : sessions) {
    // Per session: deltas between consecutive records within one session.
    // Multi-API tasks keep one inputs.jsonl per api-<k> subdirectory.
    std::vector<std::filesystem::path> input_files;
    if (std::filesystem::exists(s.dir / "inputs.jsonl"))
      input_files.push_back(s.dir / "inputs.jsonl");
    for (auto it = std::filesystem::directory_iterator(s.dir);
         it != std::filesystem::directory_iterator(); ++it) {
      if (it->is_directory() &&
          it->path().filename().string().rfind("api-", 0) == 0 &&
          std::filesystem::exists(it->path() / "inputs.jsonl"))
        input_files.push_back(it->path() / "inputs.jsonl");
    }
    std::map<std::string, std::vector<int64_t>> ts_per_api;
    for (const auto& f : input_files) {
      auto records = load_input_records(f);
      for (const auto& r : records)
        ts_per_api[api_key(r.service, r.txn_id)].push_back(r.ts_us);
    }
    for (auto& [api, ts] : ts_per_api) {
      seen_apis.insert(api);
      std::sort(ts.begin(), ts.end());
      for (size_t i = 1; i < ts.size(); ++i)
        deltas_per_api[api].push_back(
            static_cast<double>(ts[i] - ts[i - 1]) / 1000.0);
    }
  }

  std::vector<double> means, medians;
  for (const auto& api : seen_apis) {
    auto it = deltas_per_api.find(api);
    if (it == deltas_per_api.end() || it->second.empty()) {
      out.excluded.push_back(api);  // fewer than two records
      continue;
    }
    ThroughputStats::PerApi p;
    p.mean_ms = mean_of(it->second);
    p.median_ms = median_of(it->second);
    p.trimmed_mean_ms = trimmed_mean_of(it->second);
    p.deltas = it->second.size();
    means.push_back(p.mean_ms);
    medians.push_back(p.median_ms);
    out.per_api[api] = p;
  }
  out.mean_of_means = mean_of(means);
  out.median_of_means = median_of(means);
  out.mean_of_medians = mean_of(medians);
  out.median_of_medians = median_of(medians);
  return out;
}

nlohmann::json CoverageStats::to_json() const {
  nlohmann::json j;
  j["per_api"] = per_api;
  j["mean"] = mean;
  j["median"] = median;
  j["apis_with_info"] = apis_with_info;
  j["apis_without_info"] = apis_without_info;
  return j;
}

CoverageStats coverage_stats(const std::vector<SessionRef>& sessions) {
  CoverageStats out;
  std::map<std::string, double> best;
  std::set<std::string> absent;
  for (const auto& s : sessions) {
    for (const auto& sj : s.report.value("sessions", nlohmann::json::array())) {
      if (!sj.contains("service")) continue;
      std::string api = api_key(sj.value("service", ""), sj.value("txn_id", 0u));
      if (!sj.contains("coverage") || sj["coverage"].is_null() ||
          sj["coverage"]["fraction"].is_null()) {
        absent.insert(api);
        continue;
      }
      double f = sj["coverage"]["fraction"].get<double>();
      auto it = best.find(api);
      if (it == best.end() || f > it->second) best[api] = f;
    }
  }
  std::vector<double> fractions;
  for (const auto& [api, f] : best) {
    out.per_api[api] = f;
    fractions.push_back(f);
    absent.erase(api);
  }
  out.mean = mean_of(fractions);
  out.median = median_of(fractions);
  out.apis_with_info = best.size();
  out.apis_without_info = absent.size();
  return out;
}

nlohmann::json PermissionMap::to_json() const {
  nlohmann::json j;
  nlohmann::json apis_j = nlohmann::json::object();
  for (const auto& [api, perms] : apis) apis_j[api] = perms;
  j["apis"] = apis_j;
  j["provenance"] = provenance;
  return j;
}

PermissionMap PermissionMap::from_json(const nlohmann::json& j) {
  PermissionMap m;
  const nlohmann::json* apis_j = nullptr;
  if (j.contains("apis")) apis_j = &j["apis"];
  else if (j.contains("permissions")) apis_j = &j["permissions"];
  if (apis_j) {
    for (auto it = apis_j->begin(); it != apis_j->end(); ++it) {
      std::set<std::string> perms;
      for (const auto& p : it.value()) perms.insert(p.get<std::string>());
      m.apis[it.key()] = std::move(perms);
    }
  }
  m.provenance = j.value("provenance", "reference");
  return m;
}

PermissionMap build_permission_map(const std::vector<SessionRef>& sessions,
                                   const Surface& surface) {
  PermissionMap out;
  for (const auto& s : sessions) {
    std::vector<InputRecord> records = load_input_records(s.dir / "inputs.jsonl");
    for (auto it = std::filesystem::directory_iterator(s.dir);
         it != std::filesystem::directory_iterator(); ++it) {
      if (it->is_directory() &&
          it->path().filename().string().rfind("api-", 0) == 0) {
        auto extra = load_input_records(it->path() / "inputs.jsonl");
        records.insert(records.end(), extra.begin(), extra.end());
      }
    }
    for (const auto& r : records) {
      const ApiDescriptor* d = surface.find(r.service, r.txn_id);
      if (!d) continue;  // unknown txn probes do not name an API
      auto& perms = out.apis[d->qualified_name()];
      if (r.outcome.value("status", "") == "permission_denied")
        perms.insert(r.outcome.value("permission", ""));
    }
  }
  return out;
}

PermissionMap load_reference_map(const std::filesystem::path& path) {
  return PermissionMap::from_json(read_json_file(path));
}

nlohmann::json MapDiff::to_json() const {
  auto pairs = [](const std::vector<std::pair<std::string, std::string>>& v) {
    auto arr = nlohmann::json::array();
    for (const auto& [api, perm] : v) arr.push_back({{"api", api}, {"permission", perm}});
    return arr;
  };
  nlohmann::json j;
  j["reference"] = reference_name;
  j["new"] = {{"count", new_entries.size()}, {"entries", pairs(new_entries)}};
  j["confirmed"] = {{"count", confirmed.size()},
                    {"fraction_restricted", confirmed_fraction_restricted},
                    {"fraction_unrestricted", confirmed_fraction_unrestricted},
                    {"entries", pairs(confirmed)}};
  j["unconfirmed_reference"] = pairs(unconfirmed_reference);
  return j;
}

MapDiff diff_permission_map(const PermissionMap& observed,
                            const PermissionMap& reference,
                            const std::string& reference_name) {
  MapDiff d;
  d.reference_name = reference_name;
  size_t reference_total = 0;
  size_t reference_restricted = 0;
  for (const auto& [api, perms] : reference.apis) {
    bool tested = observed.apis.count(api) > 0;
    for (const auto& p : perms) {
      ++reference_total;
      if (tested) ++reference_restricted;
      if (tested && observed.apis.at(api).count(p))
        d.confirmed.emplace_back(api, p);
      else if (tested)
        d.unconfirmed_reference.emplace_back(api, p);
    }
  }
  for (const auto& [api, perms] : observed.apis) {
    auto rit = reference.apis.find(api);
    for (const auto& p : perms) {
      if (rit == reference.apis.end() || !rit->second.count(p))
        d.new_entries.emplace_back(api, p);
    }
  }
  d.confirmed_fraction_restricted =
      reference_restricted
          ? static_cast<double>(d.confirmed.size()) / reference_restricted
          : 0.0;
  d.confirmed_fraction_unrestricted =
      reference_total
          ? static_cast<double>(d.confirmed.size()) / reference_total
          : 0.0;
  return d;
}

std::string render_throughput_table(const ThroughputStats& stats) {
  char buf[256];
  std::string out;
  out += "inter-execution time (ms)\n";
  out += "api                                  mean    median  trimmed5%   n\n";
  for (const auto& [api, s] : stats.per_api) {
    snprintf(buf, sizeof(buf), "%-34s %8.3f %8.3f %9.3f %5zu\n", api.c_str(),
             s.mean_ms, s.median_ms, s.trimmed_mean_ms, s.deltas);
    out += buf;
  }
  snprintf(buf, sizeof(buf),
           "aggregate: mean(means)=%.3f median(means)=%.3f mean(medians)=%.3f "
           "median(medians)=%.3f\n",
           stats.mean_of_means, stats.median_of_means, stats.mean_of_medians,
           stats.median_of_medians);
  out += buf;
  return out;
}

std::string render_coverage_table(const CoverageStats& stats) {
  char buf[256];
  std::string out;
  out += "coverage fraction per api\n";
  for (const auto& [api, f] : stats.per_api) {
    snprintf(buf, sizeof(buf), "%-34s %6.2f%%\n", api.c_str(), 100.0 * f);
    out += buf;
  }
  snprintf(buf, sizeof(buf),
           "mean=%.2f%% median=%.2f%% with_info=%zu without_info=%zu\n",
           100.0 * stats.mean, 100.0 * stats.median, stats.apis_with_info,
           stats.apis_without_info);
  out += buf;
  return out;
}

std::string render_diff_table(const MapDiff& diff) {
  char buf[256];
  std::string out;
  snprintf(buf, sizeof(buf), "reference: %s\n", diff.reference_name.c_str());
  out += buf;
  snprintf(buf, sizeof(buf),
           "new: %zu  confirmed: %zu (%.2f%% restricted, %.2f%% unrestricted)  "
           "unconfirmed: %zu\n",
           diff.new_entries.size(), diff.confirmed.size(),
           100.0 * diff.confirmed_fraction_restricted,
           100.0 * diff.confirmed_fraction_unrestricted,
           diff.unconfirmed_reference.size());
  out += buf;
  return out;
}

}  // namespace anthill
