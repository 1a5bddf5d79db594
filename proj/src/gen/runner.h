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

#ifndef ANTHILL_GEN_RUNNER_H_
#define ANTHILL_GEN_RUNNER_H_

#include <filesystem>
#include <optional>
#include <string>

#include "gen/generators.h"
#include "surface/surface.h"

namespace anthill {

struct GenRunnerOptions {
  GenConfig config;
  std::string endpoint;
  std::optional<std::string> feedback_endpoint;
  std::string service;
  uint32_t txn_id = 0;
  std::optional<ApiDescriptor> descriptor;  // required for typed generators
  uint32_t principal_id = 0;
  double budget_s = 60.0;
  std::optional<uint64_t> budget_execs;  // overrides the time budget
  std::filesystem::path out_dir;         // inputs.jsonl, coverage.bin, gen_stats.json
};

// Runs the generation loop against a live target until the budget is spent,
// the exec budget is reached, or SIGTERM arrives. Persists artifacts and a
// gen_stats.json summary. Returns the process exit code (0 also on target
// death — the stats say why the session ended).
int run_generator_session(const GenRunnerOptions& options);

}  // namespace anthill

#endif  // ANTHILL_GEN_RUNNER_H_
