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

#include "common/fs.h"

#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "common/clock.h"
#include "common/error.h"

namespace anthill {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kInfra, "cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<std::string> read_file_if_exists(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kInfra, "cannot write file: " + path.string());
  out << content;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  write_file(tmp, content);
  fs::rename(tmp, path);
}

nlohmann::json read_json_file(const fs::path& path) {
  auto text = read_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kValidation,
                "invalid JSON in " + path.string() + ": " + e.what());
  }
}

void write_json_file(const fs::path& path, const nlohmann::json& j) {
  write_file(path, j.dump(2) + "\n");
}

void JsonlWriter::open(const fs::path& path) {
  close();
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  f_ = fopen(path.c_str(), "ab");
  if (!f_) throw Error(ErrorKind::kInfra, "cannot open jsonl: " + path.string());
}

void JsonlWriter::append(const nlohmann::json& j) {
  if (!f_) throw Error(ErrorKind::kInfra, "jsonl writer not open");
  std::string line = j.dump();
  line.push_back('\n');
  fwrite(line.data(), 1, line.size(), f_);
  fflush(f_);
}

void JsonlWriter::close() {
  if (f_) {
    fclose(f_);
    f_ = nullptr;
  }
}

std::vector<nlohmann::json> read_jsonl(const fs::path& path) {
  std::vector<nlohmann::json> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error&) {
      // Torn trailing line after a crash is expected; skip it.
      continue;
    }
  }
  return out;
}

fs::path make_temp_dir(const std::string& prefix) {
  static std::mt19937_64 rng(static_cast<uint64_t>(now_us()) ^ getpid());
  for (int i = 0; i < 64; ++i) {
    fs::path p = fs::temp_directory_path() /
                 (prefix + "-" + std::to_string(rng() & 0xffffff));
    std::error_code ec;
    if (fs::create_directories(p, ec) && !ec) return p;
  }
  throw Error(ErrorKind::kInfra, "cannot create temp dir with prefix " + prefix);
}

}  // namespace anthill
