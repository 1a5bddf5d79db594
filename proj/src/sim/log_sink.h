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

#ifndef ANTHILL_SIM_LOG_SINK_H_
#define ANTHILL_SIM_LOG_SINK_H_

#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace anthill {

// Target-side log: line-oriented `LEVEL TAG: message`, one char level
// (I/W/E/F), flushed per line so off-target monitors can tail it live.
class LogSink {
 public:
  virtual ~LogSink() = default;
  virtual void line(char level, const std::string& tag,
                    const std::string& msg) = 0;
  virtual void flush() {}
};

class FileLogSink : public LogSink {
 public:
  explicit FileLogSink(const std::string& path);
  ~FileLogSink() override;
  void line(char level, const std::string& tag, const std::string& msg) override;
  void flush() override;
  int fd() const { return fd_; }

 private:
  int fd_ = -1;
  std::mutex mu_;
};

// Captures lines in memory; used by in-process tests.
class MemoryLogSink : public LogSink {
 public:
  void line(char level, const std::string& tag, const std::string& msg) override;
  std::vector<std::string> lines() const;
  bool contains(const std::string& needle) const;

 private:
  mutable std::mutex mu_;
  std::vector<std::string> lines_;
};

}  // namespace anthill

#endif  // ANTHILL_SIM_LOG_SINK_H_
