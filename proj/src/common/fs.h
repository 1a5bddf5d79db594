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

#ifndef ANTHILL_COMMON_FS_H_
#define ANTHILL_COMMON_FS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace anthill {

std::string read_file(const std::filesystem::path& path);
std::optional<std::string> read_file_if_exists(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);
// Write to a temp file in the same directory, then rename. Readers either
// see the old or the new content, never a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

// Appends one JSON object per line; flushed after every record so that a
// crash of the surrounding process loses at most the line being written.
class JsonlWriter {
 public:
  JsonlWriter() = default;
  explicit JsonlWriter(const std::filesystem::path& path) { open(path); }
  ~JsonlWriter() { close(); }
  JsonlWriter(const JsonlWriter&) = delete;
  JsonlWriter& operator=(const JsonlWriter&) = delete;

  void open(const std::filesystem::path& path);
  void append(const nlohmann::json& j);
  void close();
  bool is_open() const { return f_ != nullptr; }

 private:
  FILE* f_ = nullptr;
};

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

// Unique scratch directory under the system temp root; caller owns cleanup.
std::filesystem::path make_temp_dir(const std::string& prefix);

}  // namespace anthill

#endif  // ANTHILL_COMMON_FS_H_
