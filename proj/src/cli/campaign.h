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
// One-shot campaign orchestration for CI: boot a backend, ingest tasks from
// the manifest's surface, run one troop per configured generator until task
// exhaustion, analyze the artifacts, and fail the process if required
// finding classes are missing.

#ifndef ANTHILL_CLI_CAMPAIGN_H_
#define ANTHILL_CLI_CAMPAIGN_H_

#include <filesystem>

#include "json.hpp"

namespace anthill {

struct CampaignOutcome {
  int exit_code = 0;
  nlohmann::json report;
};

CampaignOutcome run_campaign(const nlohmann::json& config_doc,
                             const std::filesystem::path& config_dir);

}  // namespace anthill

#endif  // ANTHILL_CLI_CAMPAIGN_H_
