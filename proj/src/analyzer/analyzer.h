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
// Result analysis over worker artifact trees: session inventory and finding
// dedup, throughput and coverage statistics, permission-map construction
// from denial responses, and diffing against a reference map. Every
// operation is a pure function of the artifact tree — rerunning it yields
// byte-identical output. New analyses slot in as new subcommands.

#ifndef ANTHILL_ANALYZER_ANALYZER_H_
#define ANTHILL_ANALYZER_ANALYZER_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "gen/recorder.h"
#include "monitors/patterns.h"
#include "surface/surface.h"

namespace anthill {

struct SessionRef {
  std::filesystem::path dir;       // directory holding report.json
  std::string task_id;
  nlohmann::json report;
};

struct ScanResult {
  std::vector<SessionRef> sessions;
  // Per-session findings (worker-reported, deduplicated) plus heuristic
  // findings recovered by re-classifying archived target logs.
  std::vector<nlohmann::json> findings;
  // class -> api -> counts, for quick campaign-level assertions.
  nlohmann::json finding_groups;
  std::vector<std::string> malformed;

  nlohmann::json to_json() const;
};

ScanResult analyzer_scan(const std::filesystem::path& artifact_root,
                         const PatternTable& patterns);

// Inter-execution time statistics in the four-aggregate layout (mean/median
// of per-API means and medians), plus a clearly-labeled 5% trimmed mean as a
// secondary column. APIs with fewer than two records are excluded and noted.
struct ThroughputStats {
  struct PerApi {
    double mean_ms = 0;
    double median_ms = 0;
    double trimmed_mean_ms = 0;
    size_t deltas = 0;
  };
  std::map<std::string, PerApi> per_api;  // "service:txn"
  double mean_of_means = 0;
  double median_of_means = 0;
  double mean_of_medians = 0;
  double median_of_medians = 0;
  std::vector<std::string> excluded;

  nlohmann::json to_json() const;
};

ThroughputStats throughput_stats(const std::vector<SessionRef>& sessions);

struct CoverageStats {
  std::map<std::string, double> per_api;  // fraction in [0,1]
  double mean = 0;
  double median = 0;
  size_t apis_with_info = 0;
  size_t apis_without_info = 0;

  nlohmann::json to_json() const;
};

CoverageStats coverage_stats(const std::vector<SessionRef>& sessions);

// api ("service.method") -> permissions observed via PERMISSION_DENIED
// responses. Tested APIs with no denials map to the empty set.
struct PermissionMap {
  std::map<std::string, std::set<std::string>> apis;
  std::string provenance = "exception_parse";

  nlohmann::json to_json() const;
  static PermissionMap from_json(const nlohmann::json& j);
};

// `surface` resolves (service, txn_id) to method names.
PermissionMap build_permission_map(const std::vector<SessionRef>& sessions,
                                   const Surface& surface);

struct MapDiff {
  std::string reference_name;
  std::vector<std::pair<std::string, std::string>> new_entries;  // (api, perm)
  std::vector<std::pair<std::string, std::string>> confirmed;
  std::vector<std::pair<std::string, std::string>> unconfirmed_reference;
  double confirmed_fraction_restricted = 0;    // denominator: tested APIs only
  double confirmed_fraction_unrestricted = 0;  // denominator: whole reference

  nlohmann::json to_json() const;
};

MapDiff diff_permission_map(const PermissionMap& observed,
                            const PermissionMap& reference,
                            const std::string& reference_name);

// Reference maps arrive either as a ground-truth export ({"permissions":
// {...}}) or as a previously built map ({"apis": {...}}).
PermissionMap load_reference_map(const std::filesystem::path& path);

// Table-style text rendering for the CLI (--human).
std::string render_throughput_table(const ThroughputStats& stats);
std::string render_coverage_table(const CoverageStats& stats);
std::string render_diff_table(const MapDiff& diff);

}  // namespace anthill

#endif  // ANTHILL_ANALYZER_ANALYZER_H_
