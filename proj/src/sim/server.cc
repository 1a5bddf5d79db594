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

#include "sim/server.h"

#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <thread>

#include "common/clock.h"
#include "common/fs.h"
#include "sim/watchdog.h"

namespace anthill {

namespace {

class SimServer {
 public:
  explicit SimServer(const SimServerOptions& opts) : opts_(opts) {}
  int run();

 private:
  void conn_loop(TcpConn conn);
  void feedback_accept_loop();
  void watchdog_loop();
  void companion_supervisor_loop();

  void send_feedback_locked(const FeedbackFrame& fb);
  void drop_request_conns();
  void register_conn(int fd);
  void unregister_conn(int fd);

  // Holds the dispatcher lock (already owned by the caller) until the
  // watchdog bumps the generation or the process dies.
  void freeze_while_generation(uint64_t gen);

  void spawn_companion();
  void kill_companion();

  SimServerOptions opts_;
  std::unique_ptr<FileLogSink> log_;
  std::unique_ptr<SimCore> core_;

  std::timed_mutex dispatch_mu_;
  std::atomic<uint64_t> generation_{0};
  std::atomic<int> reboot_pending_{0};

  TcpListener listener_;
  TcpListener feedback_listener_;
  std::mutex feedback_mu_;
  TcpConn feedback_conn_;
  std::atomic<bool> feedback_connected_{false};

  std::mutex conns_mu_;
  std::set<int> conn_fds_;

  pid_t companion_pid_ = -1;
  std::atomic<bool> companion_alive_{false};
};

void SimServer::register_conn(int fd) {
  std::lock_guard<std::mutex> lk(conns_mu_);
  conn_fds_.insert(fd);
}

void SimServer::unregister_conn(int fd) {
  std::lock_guard<std::mutex> lk(conns_mu_);
  conn_fds_.erase(fd);
}

void SimServer::drop_request_conns() {
  std::lock_guard<std::mutex> lk(conns_mu_);
  for (int fd : conn_fds_) ::shutdown(fd, SHUT_RDWR);
}

void SimServer::send_feedback_locked(const FeedbackFrame& fb) {
  std::lock_guard<std::mutex> lk(feedback_mu_);
  if (!feedback_conn_.valid()) return;
  if (feedback_conn_.send_frame(encode_feedback(fb)) != IoStatus::kOk) {
    feedback_conn_.close();
    feedback_connected_.store(false);
  }
}

void SimServer::freeze_while_generation(uint64_t gen) {
  while (generation_.load() == gen) sleep_ms(20);
}

void SimServer::spawn_companion() {
  if (!opts_.companion) return;
  static const char kHeartbeat[] = "I ui: heartbeat\n";
  int log_fd = log_->fd();
  pid_t pid = fork();
  if (pid == 0) {
    // Companion child: emit a heartbeat line once a second until killed.
    // Only async-signal-safe calls after fork.
    for (;;) {
      ssize_t ignored = write(log_fd, kHeartbeat, sizeof(kHeartbeat) - 1);
      (void)ignored;
      usleep(1000 * 1000);
    }
  }
  companion_pid_ = pid;
  companion_alive_.store(pid > 0);
}

void SimServer::kill_companion() {
  if (companion_pid_ > 0) ::kill(companion_pid_, SIGKILL);
}

void SimServer::companion_supervisor_loop() {
  if (companion_pid_ <= 0) return;
  for (;;) {
    int status = 0;
    pid_t r = waitpid(companion_pid_, &status, WNOHANG);
    if (r == companion_pid_) {
      companion_alive_.store(false);
      log_->line('E', "ActivityManager", "Process ui has died");
      return;  // the companion is not restarted; its state stays broken
    }
    sleep_ms(300);
  }
}

void SimServer::watchdog_loop() {
  WatchdogState wd(core_->manifest().watchdog, real_mono_clock());
  const auto& spec = core_->manifest().watchdog;
  int64_t tick_ms = static_cast<int64_t>(spec.tick_s * 1000.0);
  for (;;) {
    sleep_ms(tick_ms);
    bool acquired =
        dispatch_mu_.try_lock_for(std::chrono::milliseconds(200));
    if (acquired) dispatch_mu_.unlock();
    auto decision = wd.tick(acquired);
    if (!decision.fire) continue;

    core_->note_watchdog_kill();
    log_->line('W', "Watchdog",
               "WATCHDOG KILLING SYSTEM PROCESS: Blocked in monitor "
               "sim.Dispatcher on dispatch thread");
    log_->line('W', "Watchdog", "dispatch thread stack trace:");
    log_->line('W', "Watchdog", "  at sim.Dispatcher.monitor(Dispatcher:1)");
    log_->line('W', "Watchdog", "  at sim.Watchdog$HandlerChecker.run(Watchdog:179)");
    log_->line('W', "Watchdog", "*** GOODBYE!");

    if (decision.bootloop) {
      log_->line('E', "SystemServer",
                 "BOOTLOOP: watchdog kill threshold reached, refusing restart");
      log_->flush();
      _exit(kExitBootloop);
    }

    // Restart in place: every client dies, the stuck holder releases once it
    // observes the generation bump, and a boot thread resets state. Poison
    // left behind by the freeze re-freezes the boot, earning the next kill.
    drop_request_conns();
    reboot_pending_.fetch_add(1);
    uint64_t gen = generation_.fetch_add(1) + 1;
    std::thread([this, gen] {
      std::unique_lock<std::timed_mutex> lk(dispatch_mu_);
      if (generation_.load() != gen) {
        reboot_pending_.fetch_sub(1);
        return;
      }
      core_->soft_reboot("watchdog restart");
      reboot_pending_.fetch_sub(1);
      if (core_->poisoned()) freeze_while_generation(gen);
    }).detach();
  }
}

void SimServer::feedback_accept_loop() {
  for (;;) {
    auto conn = feedback_listener_.accept(500);
    if (!conn) continue;
    std::lock_guard<std::mutex> lk(feedback_mu_);
    feedback_conn_ = std::move(*conn);
    feedback_connected_.store(true);
  }
}

void SimServer::conn_loop(TcpConn conn) {
  register_conn(conn.fd());
  for (;;) {
    Bytes body;
    IoStatus st = conn.recv_frame(body, -1);
    if (st != IoStatus::kOk) break;
    auto req = parse_request(body);
    if (!req) break;  // bad magic or truncated header: drop the connection

    uint64_t gen = generation_.load();
    ExecResult result;
    bool respond = false;
    {
      std::unique_lock<std::timed_mutex> lk(dispatch_mu_);
      if (generation_.load() != gen || reboot_pending_.load() > 0) {
        // A reboot intervened between receive and dispatch; this client is
        // already disconnected or about to be.
        break;
      }
      result = core_->execute(*req);
      switch (result.action) {
        case ExecAction::kRespond:
        case ExecAction::kKillCompanion:
          if (result.emit_feedback) send_feedback_locked(result.feedback);
          respond = true;
          if (result.action == ExecAction::kKillCompanion) kill_companion();
          break;
        case ExecAction::kAbortProcess:
          log_->flush();
          _exit(kExitAbort);
        case ExecAction::kSoftReboot: {
          drop_request_conns();
          uint64_t next = generation_.fetch_add(1) + 1;
          core_->soft_reboot("uncaught exception");
          if (core_->poisoned()) freeze_while_generation(next);
          break;
        }
        case ExecAction::kFreeze:
          // Hold the dispatcher lock until the watchdog kills us.
          freeze_while_generation(gen);
          break;
      }
    }
    if (!respond) break;
    if (conn.send_frame(encode_response(result.response)) != IoStatus::kOk)
      break;
  }
  unregister_conn(conn.fd());
}

int SimServer::run() {
  signal(SIGPIPE, SIG_IGN);

  Manifest manifest = load_manifest(opts_.manifest_path);
  log_ = std::make_unique<FileLogSink>(opts_.log_path.string());

  // Fork the companion before any thread exists.
  spawn_companion();

  SimCore::Options core_opts;
  core_opts.boot_nonce = opts_.boot_nonce
                             ? opts_.boot_nonce
                             : (static_cast<uint64_t>(getpid()) << 20) ^
                                   static_cast<uint64_t>(now_us());
  core_opts.instrumented = opts_.instrument;
  core_ = std::make_unique<SimCore>(std::move(manifest), log_.get(), core_opts);
  core_->set_introspection_extra([this] {
    nlohmann::json j;
    j["feedback_connected"] = feedback_connected_.load();
    j["companion_alive"] = companion_alive_.load();
    return j;
  });

  listener_ = TcpListener::bind(opts_.port);
  if (opts_.instrument)
    feedback_listener_ = TcpListener::bind(opts_.feedback_port);

  nlohmann::json ready;
  ready["pid"] = getpid();
  ready["port"] = listener_.port();
  if (opts_.instrument) ready["feedback_port"] = feedback_listener_.port();
  ready["boot_nonce"] = core_opts.boot_nonce;
  ready["fingerprint"] = core_->manifest().fingerprint();
  if (!opts_.ready_file.empty())
    write_file_atomic(opts_.ready_file, ready.dump() + "\n");
  printf("%s\n", ready.dump().c_str());
  fflush(stdout);

  std::thread(&SimServer::watchdog_loop, this).detach();
  if (opts_.instrument)
    std::thread(&SimServer::feedback_accept_loop, this).detach();
  if (companion_pid_ > 0)
    std::thread(&SimServer::companion_supervisor_loop, this).detach();

  for (;;) {
    auto conn = listener_.accept(500);
    if (!conn) continue;
    std::thread(&SimServer::conn_loop, this, std::move(*conn)).detach();
  }
}

}  // namespace

int run_sim_server(const SimServerOptions& options) {
  static SimServer* server = new SimServer(options);
  // Immediate teardown on SIGTERM: workers own artifact persistence, the
  // target has nothing to save.
  signal(SIGTERM, +[](int) { _exit(0); });
  signal(SIGINT, +[](int) { _exit(0); });
  return server->run();
}

}  // namespace anthill
