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

#ifndef ANTHILL_MONITORS_LOG_TAIL_H_
#define ANTHILL_MONITORS_LOG_TAIL_H_

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace anthill {

// Incremental reader of a growing line-oriented file. Only complete lines
// are returned; a partial trailing line stays buffered until its newline
// arrives. Tolerates the file not existing yet.
class LogTail {
 public:
  explicit LogTail(std::filesystem::path path) : path_(std::move(path)) {}

  std::vector<std::string> read_new() {
    std::vector<std::string> out;
    std::ifstream in(path_, std::ios::binary);
    if (!in) return out;
    in.seekg(0, std::ios::end);
    std::streamoff size = in.tellg();
    if (size <= offset_) return out;
    in.seekg(offset_);
    std::string chunk(static_cast<size_t>(size - offset_), 0);
    in.read(chunk.data(), static_cast<std::streamsize>(chunk.size()));
    offset_ = size;
    pending_ += chunk;
    size_t start = 0;
    for (;;) {
      size_t nl = pending_.find('\n', start);
      if (nl == std::string::npos) break;
      out.push_back(pending_.substr(start, nl - start));
      start = nl + 1;
    }
    pending_.erase(0, start);
    return out;
  }

 private:
  std::filesystem::path path_;
  std::streamoff offset_ = 0;
  std::string pending_;
};

}  // namespace anthill

#endif  // ANTHILL_MONITORS_LOG_TAIL_H_
