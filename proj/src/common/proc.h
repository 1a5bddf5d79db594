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

#ifndef ANTHILL_COMMON_PROC_H_
#define ANTHILL_COMMON_PROC_H_

#include <sys/types.h>

#include <optional>
#include <string>
#include <vector>

namespace anthill {

struct SpawnOptions {
  // Written to the child's stdin, which is then closed. Empty = closed stdin.
  std::string stdin_data;
  // Redirect targets; empty means inherit.
  std::string stdout_path;
  std::string stderr_path;
  std::string cwd;
};

// Child process handle. Reaps on wait; never leaks zombies when used through
// wait_exit/terminate.
class Child {
 public:
  Child() = default;
  explicit Child(pid_t pid) : pid_(pid) {}

  pid_t pid() const { return pid_; }
  bool valid() const { return pid_ > 0; }

  // Non-blocking: exit code if the child has exited (reaped), else nullopt.
  // Abnormal termination (signal) is reported as 128+signo.
  std::optional<int> poll_exit();
  // Blocks up to timeout_ms; nullopt if still running.
  std::optional<int> wait_exit(int timeout_ms);
  // SIGTERM, grace, then SIGKILL. Always reaps. Returns exit code.
  int terminate(int grace_ms = 500);
  // Immediate SIGKILL + reap.
  int kill_now();

  bool running();

 private:
  pid_t pid_ = -1;
  std::optional<int> exit_code_;
};

// fork/exec with argv[0] as the binary path.
Child spawn(const std::vector<std::string>& argv, const SpawnOptions& opts = {});

// Path to the currently running executable (for self re-exec of subcommands).
std::string self_exe_path();

}  // namespace anthill

#endif  // ANTHILL_COMMON_PROC_H_
