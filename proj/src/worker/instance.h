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
// Fresh target instance management. Every launch starts a new target
// process from pristine manifest state; "reset" is relaunch. Instrumented
// instances expose a coverage feedback endpoint, Vanilla ones do not (they
// are reserved for verification with non-intrusive monitors only).

#ifndef ANTHILL_WORKER_INSTANCE_H_
#define ANTHILL_WORKER_INSTANCE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "common/proc.h"

namespace anthill {

enum class InstanceFlavor { kInstrumented, kVanilla };

struct InstanceHandle {
  std::string instance_id;
  std::string endpoint;
  std::optional<std::string> feedback_endpoint;  // instrumented only
  Child process;
  InstanceFlavor flavor = InstanceFlavor::kInstrumented;
  int64_t booted_at_us = 0;
  std::filesystem::path log_path;
  uint64_t boot_nonce = 0;
};

struct InstanceOptions {
  std::filesystem::path target_binary;  // usually the running executable
  std::filesystem::path manifest;
  std::filesystem::path work_dir;  // ready files and similar scratch
  std::filesystem::path log_path;
  double boot_timeout_s = 15.0;
  int boot_retries = 2;
  bool companion = true;
  std::optional<uint64_t> boot_nonce;
};

// Launches a fresh instance and waits for it to answer a health probe.
// Ports are chosen by the target itself and read back from its ready file,
// so clashes self-resolve; boot failures retry up to boot_retries before
// throwing Error(kInfra).
InstanceHandle fresh_instance(InstanceFlavor flavor, const InstanceOptions& options);

// SIGTERM then SIGKILL; reaps the process.
void teardown_instance(InstanceHandle& handle);

}  // namespace anthill

#endif  // ANTHILL_WORKER_INSTANCE_H_
