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

#include "verify/replay.h"

#include "common/clock.h"
#include "monitors/log_tail.h"
#include "sim/client.h"

namespace anthill {

namespace {

// Shared tail-and-classify state for one replay.
struct SignalCollector {
  LogTail tail;
  LogClassifier classifier;
  SeqTimeline timeline;  // replay sequence numbering
  ReplaySignals* out;

  SignalCollector(const std::filesystem::path& log_path, PatternTable table,
                  ReplaySignals* signals)
      : tail(log_path), classifier(std::move(table)), out(signals) {}

  void poll() {
    for (const auto& line : tail.read_new()) {
      auto cand = classifier.feed_line(line, now_us(), timeline);
      if (cand) {
        out->pattern_ids.insert(cand->pattern_id);
        out->candidates.push_back(std::move(*cand));
        last_activity_us = now_us();
      }
    }
  }

  int64_t last_activity_us = now_us();
};

}  // namespace

ReplaySignals replay_records(InstanceHandle& instance,
                             const std::vector<InputRecord>& records,
                             const PatternTable& patterns,
                             const ReplayOptions& options) {
  ReplaySignals signals;
  SignalCollector collector(instance.log_path, patterns, &signals);
  SimClient client(instance.endpoint);

  const int64_t wall_deadline =
      mono_ms() + static_cast<int64_t>(options.send_wall_cap_s * 1000.0);

  for (const auto& rec : records) {
    if (mono_ms() >= wall_deadline) break;
    if (instance.process.valid() && !instance.process.running()) break;

    Request req;
    req.service = rec.service;
    req.txn_id = rec.txn_id;
    req.principal_id = options.principal_id;
    req.payload = rec.raw;
    collector.timeline.add(now_us(), rec.seq);
    CallResult res = client.call(req, options.per_send_timeout_ms);
    ++signals.sent;
    if (res.ok()) {
      ++signals.responded;
      continue;
    }

    // Stalled or dropped: give the target a chance to come back (soft
    // reboot) before pushing on. A bootloop never comes back; the wall cap
    // ends the sending phase and observation picks up the cascade.
    collector.poll();
    int64_t recover_deadline =
        mono_ms() + static_cast<int64_t>(options.recover_wait_s * 1000.0);
    while (mono_ms() < recover_deadline && mono_ms() < wall_deadline) {
      if (instance.process.valid() && !instance.process.running()) break;
      if (client.ping(200)) break;
      collector.poll();
      sleep_ms(200);
    }
  }

  // Post-send observation.
  const int64_t observe_deadline =
      mono_ms() + static_cast<int64_t>(options.observe_max_s * 1000.0);
  for (;;) {
    collector.poll();
    if (instance.process.valid()) {
      if (auto code = instance.process.poll_exit()) {
        signals.process_exited = true;
        signals.exit_code = *code;
        collector.poll();
        break;
      }
    }
    double grace = signals.pattern_ids.count("watchdog_kill")
                       ? options.quiet_grace_watchdog_s
                       : options.quiet_grace_s;
    if (now_us() - collector.last_activity_us >
        static_cast<int64_t>(grace * 1e6))
      break;
    if (mono_ms() >= observe_deadline) break;
    sleep_ms(100);
  }

  signals.candidates = merge_candidates(std::move(signals.candidates));
  return signals;
}

std::optional<std::array<uint8_t, kMapSize>> replay_coverage(
    InstanceHandle& instance, const std::vector<InputRecord>& records,
    const ReplayOptions& options) {
  if (!instance.feedback_endpoint) return std::nullopt;
  auto [fb_host, fb_port] = parse_endpoint(*instance.feedback_endpoint);
  auto feedback = TcpConn::connect(fb_host, fb_port, 2000);
  if (!feedback) return std::nullopt;

  SimClient client(instance.endpoint);
  CoverageMap map;
  for (const auto& rec : records) {
    Request req;
    req.service = rec.service;
    req.txn_id = rec.txn_id;
    req.principal_id = options.principal_id;
    req.payload = rec.raw;
    CallResult res = client.call(req, options.per_send_timeout_ms);
    if (!res.ok()) continue;  // deaths cannot emit frames; mirror recording
    Bytes body;
    if (feedback->recv_frame(body, 2000) != IoStatus::kOk) continue;
    auto fb = parse_feedback(body);
    if (fb) fold_edges(fb->edges, map);
  }
  return classify_map(map);
}

}  // namespace anthill
