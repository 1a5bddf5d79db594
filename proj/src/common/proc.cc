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

#include "common/proc.h"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "common/clock.h"
#include "common/error.h"

namespace anthill {

namespace {

int decode_status(int status) {
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return -1;
}

}  // namespace

std::optional<int> Child::poll_exit() {
  if (exit_code_) return exit_code_;
  if (pid_ <= 0) return std::nullopt;
  int status = 0;
  pid_t r = waitpid(pid_, &status, WNOHANG);
  if (r == pid_) {
    exit_code_ = decode_status(status);
    return exit_code_;
  }
  if (r < 0 && errno == ECHILD) {
    exit_code_ = -1;
    return exit_code_;
  }
  return std::nullopt;
}

std::optional<int> Child::wait_exit(int timeout_ms) {
  int64_t deadline = mono_ms() + timeout_ms;
  for (;;) {
    auto code = poll_exit();
    if (code) return code;
    if (mono_ms() >= deadline) return std::nullopt;
    sleep_ms(10);
  }
}

int Child::terminate(int grace_ms) {
  if (exit_code_) return *exit_code_;
  if (pid_ <= 0) return -1;
  ::kill(pid_, SIGTERM);
  auto code = wait_exit(grace_ms);
  if (code) return *code;
  return kill_now();
}

int Child::kill_now() {
  if (exit_code_) return *exit_code_;
  if (pid_ <= 0) return -1;
  ::kill(pid_, SIGKILL);
  int status = 0;
  waitpid(pid_, &status, 0);
  exit_code_ = decode_status(status);
  return *exit_code_;
}

bool Child::running() { return !poll_exit().has_value(); }

Child spawn(const std::vector<std::string>& argv, const SpawnOptions& opts) {
  if (argv.empty()) throw Error(ErrorKind::kConfig, "spawn: empty argv");

  int stdin_pipe[2] = {-1, -1};
  if (!opts.stdin_data.empty()) {
    if (pipe(stdin_pipe) != 0)
      throw Error(ErrorKind::kInfra, "pipe() failed");
  }

  pid_t pid = fork();
  if (pid < 0) throw Error(ErrorKind::kInfra, "fork() failed");

  if (pid == 0) {
    // Child.
    if (stdin_pipe[0] >= 0) {
      dup2(stdin_pipe[0], 0);
      close(stdin_pipe[0]);
      close(stdin_pipe[1]);
    } else {
      int devnull = open("/dev/null", O_RDONLY);
      if (devnull >= 0) dup2(devnull, 0);
    }
    auto redirect = [](const std::string& path, int target) {
      if (path.empty()) return;
      int fd = open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
      if (fd >= 0) {
        dup2(fd, target);
        close(fd);
      }
    };
    redirect(opts.stdout_path, 1);
    redirect(opts.stderr_path, 2);
    if (!opts.cwd.empty() && chdir(opts.cwd.c_str()) != 0) _exit(127);

    std::vector<char*> args;
    args.reserve(argv.size() + 1);
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    execv(args[0], args.data());
    _exit(127);
  }

  // Parent.
  if (stdin_pipe[0] >= 0) {
    close(stdin_pipe[0]);
    size_t off = 0;
    // Ignore EPIPE from a child that exits before reading its task.
    signal(SIGPIPE, SIG_IGN);
    while (off < opts.stdin_data.size()) {
      ssize_t n = write(stdin_pipe[1], opts.stdin_data.data() + off,
                        opts.stdin_data.size() - off);
      if (n <= 0) break;
      off += static_cast<size_t>(n);
    }
    close(stdin_pipe[1]);
  }
  return Child(pid);
}

std::string self_exe_path() {
  char buf[4096];
  ssize_t n = readlink("/proc/self/exe", buf, sizeof(buf) - 1);
  if (n <= 0) throw Error(ErrorKind::kInfra, "readlink(/proc/self/exe) failed");
  buf[n] = 0;
  return std::string(buf);
}

}  // namespace anthill
