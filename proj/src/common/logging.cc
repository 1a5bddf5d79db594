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

#include "common/logging.h"

#include <atomic>
#include <cstdio>
#include <ctime>
#include <mutex>

#include "common/clock.h"

namespace anthill {

namespace {
std::atomic<bool> g_human{false};
std::mutex g_mu;
}  // namespace

void log_set_human(bool human) { g_human.store(human); }

void log_line(const char* level, const std::string& component,
              const std::string& msg, const nlohmann::json& fields) {
  std::lock_guard<std::mutex> lock(g_mu);
  if (g_human.load()) {
    time_t t = time(nullptr);
    struct tm tmv;
    localtime_r(&t, &tmv);
    char ts[16];
    strftime(ts, sizeof(ts), "%H:%M:%S", &tmv);
    std::string extra;
    for (auto it = fields.begin(); it != fields.end(); ++it) {
      extra += " ";
      extra += it.key();
      extra += "=";
      extra += it.value().is_string() ? it.value().get<std::string>()
                                      : it.value().dump();
    }
    fprintf(stderr, "%s %-5s %-8s %s%s\n", ts, level, component.c_str(),
            msg.c_str(), extra.c_str());
  } else {
    nlohmann::json rec = fields;
    rec["ts"] = now_us();
    rec["level"] = level;
    rec["component"] = component;
    rec["msg"] = msg;
    fprintf(stderr, "%s\n", rec.dump().c_str());
  }
  fflush(stderr);
}

}  // namespace anthill
