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

#include "worker/instance.h"

#include <atomic>

#include "common/clock.h"
#include "common/error.h"
#include "common/fs.h"
#include "sim/client.h"

namespace anthill {

namespace {
std::atomic<uint64_t> g_instance_counter{0};
}

InstanceHandle fresh_instance(InstanceFlavor flavor,
                              const InstanceOptions& options) {
  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt <= options.boot_retries; ++attempt) {
    uint64_t n = g_instance_counter.fetch_add(1);
    std::string id = "inst-" + std::to_string(getpid()) + "-" + std::to_string(n);
    std::filesystem::create_directories(options.work_dir);
    std::filesystem::path ready = options.work_dir / (id + ".ready.json");
    std::error_code ec;
    std::filesystem::remove(ready, ec);

    std::vector<std::string> argv = {
        options.target_binary.string(),
        "target", "serve",
        "--manifest", options.manifest.string(),
        "--port", "0",
        "--log", options.log_path.string(),
        "--ready-file", ready.string(),
    };
    if (flavor == InstanceFlavor::kInstrumented) {
      argv.push_back("--feedback-port");
      argv.push_back("0");
    }
    if (!options.companion) argv.push_back("--no-companion");
    if (options.boot_nonce) {
      argv.push_back("--boot-nonce");
      argv.push_back(std::to_string(*options.boot_nonce));
    }

    Child child = spawn(argv);
    int64_t deadline = mono_ms() + static_cast<int64_t>(options.boot_timeout_s * 1000);
    std::optional<nlohmann::json> ready_doc;
    while (mono_ms() < deadline) {
      if (auto code = child.poll_exit()) {
        last_error = "target exited during boot with code " + std::to_string(*code);
        break;
      }
      if (auto text = read_file_if_exists(ready)) {
        try {
          ready_doc = nlohmann::json::parse(*text);
          break;
        } catch (const nlohmann::json::parse_error&) {
          // Partial write; retry next poll.
        }
      }
      sleep_ms(10);
    }
    if (!ready_doc) {
      if (child.running()) {
        last_error = "boot timeout after " + std::to_string(options.boot_timeout_s) + "s";
        child.kill_now();
      }
      continue;
    }

    InstanceHandle handle;
    handle.instance_id = id;
    handle.process = child;
    handle.flavor = flavor;
    handle.booted_at_us = now_us();
    handle.log_path = options.log_path;
    handle.endpoint = "127.0.0.1:" + std::to_string(ready_doc->at("port").get<uint16_t>());
    if (flavor == InstanceFlavor::kInstrumented)
      handle.feedback_endpoint =
          "127.0.0.1:" + std::to_string(ready_doc->at("feedback_port").get<uint16_t>());
    handle.boot_nonce = ready_doc->value("boot_nonce", uint64_t{0});

    SimClient probe(handle.endpoint);
    if (!probe.ping(2000)) {
      last_error = "instance failed health probe after boot";
      handle.process.kill_now();
      continue;
    }
    return handle;
  }
  throw Error(ErrorKind::kInfra, "fresh instance failed to boot: " + last_error);
}

void teardown_instance(InstanceHandle& handle) {
  if (handle.process.valid()) handle.process.terminate(300);
}

}  // namespace anthill
