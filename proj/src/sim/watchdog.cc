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

#include "sim/watchdog.h"

namespace anthill {

WatchdogState::Decision WatchdogState::tick(bool dispatch_lock_acquired) {
  Decision d;
  int64_t now = clock_();
  if (dispatch_lock_acquired) {
    last_ok_ms_ = now;
    return d;
  }
  if (now - last_ok_ms_ < static_cast<int64_t>(spec_.window_s * 1000.0))
    return d;

  // Dispatcher blocked for a full window: kill.
  d.fire = true;
  ++total_kills_;
  kill_times_ms_.push_back(now);
  int64_t horizon = now - static_cast<int64_t>(spec_.bootloop_window_s * 1000.0);
  while (!kill_times_ms_.empty() && kill_times_ms_.front() < horizon)
    kill_times_ms_.pop_front();
  if (kill_times_ms_.size() >= spec_.bootloop_threshold) d.bootloop = true;

  // The kill resets the stall measurement; a re-frozen dispatcher earns the
  // next kill one full window later.
  last_ok_ms_ = now;
  return d;
}

}  // namespace anthill
