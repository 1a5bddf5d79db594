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

#include "sim/log_sink.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>

#include "common/error.h"

namespace anthill {

FileLogSink::FileLogSink(const std::string& path) {
  fd_ = open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd_ < 0)
    throw Error(ErrorKind::kInfra, "cannot open target log: " + path);
}

FileLogSink::~FileLogSink() {
  if (fd_ >= 0) close(fd_);
}

void FileLogSink::line(char level, const std::string& tag,
                       const std::string& msg) {
  std::string out;
  out.reserve(tag.size() + msg.size() + 4);
  out.push_back(level);
  out.push_back(' ');
  out += tag;
  out += ": ";
  out += msg;
  out.push_back('\n');
  std::lock_guard<std::mutex> lock(mu_);
  // Single write per line keeps lines intact for concurrent appenders
  // (companion process shares the file).
  ssize_t ignored = write(fd_, out.data(), out.size());
  (void)ignored;
}

void FileLogSink::flush() {
  if (fd_ >= 0) fsync(fd_);
}

void MemoryLogSink::line(char level, const std::string& tag,
                         const std::string& msg) {
  std::string out;
  out.push_back(level);
  out.push_back(' ');
  out += tag;
  out += ": ";
  out += msg;
  std::lock_guard<std::mutex> lock(mu_);
  lines_.push_back(std::move(out));
}

std::vector<std::string> MemoryLogSink::lines() const {
  std::lock_guard<std::mutex> lock(mu_);
  return lines_;
}

bool MemoryLogSink::contains(const std::string& needle) const {
  std::lock_guard<std::mutex> lock(mu_);
  return std::any_of(lines_.begin(), lines_.end(), [&](const std::string& l) {
    return l.find(needle) != std::string::npos;
  });
}

}  // namespace anthill
