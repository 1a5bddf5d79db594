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

#ifndef ANTHILL_COMMON_LOGGING_H_
#define ANTHILL_COMMON_LOGGING_H_

#include <string>

#include "json.hpp"

namespace anthill {

// Process-wide log sink writing line-oriented JSON records to stderr, or a
// terse human layout when `--human` is set. Components are short tags like
// "troop" or "backend".
void log_set_human(bool human);
void log_line(const char* level, const std::string& component,
              const std::string& msg,
              const nlohmann::json& fields = nlohmann::json::object());

inline void log_info(const std::string& component, const std::string& msg,
                     const nlohmann::json& fields = nlohmann::json::object()) {
  log_line("info", component, msg, fields);
}
inline void log_warn(const std::string& component, const std::string& msg,
                     const nlohmann::json& fields = nlohmann::json::object()) {
  log_line("warn", component, msg, fields);
}
inline void log_error(const std::string& component, const std::string& msg,
                      const nlohmann::json& fields = nlohmann::json::object()) {
  log_line("error", component, msg, fields);
}

}  // namespace anthill

#endif  // ANTHILL_COMMON_LOGGING_H_
