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

#ifndef ANTHILL_SIM_WATCHDOG_H_
#define ANTHILL_SIM_WATCHDOG_H_

#include <cstdint>
#include <deque>

#include "common/clock.h"
#include "sim/manifest.h"

namespace anthill {

// Watchdog decision logic, separated from threads and locks so the timing
// rules are unit-testable against a fake clock. The server calls tick() on
// its cadence with whether it could briefly acquire the dispatch lock.
class WatchdogState {
 public:
  struct Decision {
    bool fire = false;      // dispatcher stuck beyond the window: kill
    bool bootloop = false;  // kill count within the bootloop window exceeded
  };

  WatchdogState(const WatchdogSpec& spec, MonoClock clock)
      : spec_(spec), clock_(std::move(clock)), last_ok_ms_(clock_()) {}

  Decision tick(bool dispatch_lock_acquired);

  uint32_t kill_count() const { return total_kills_; }

 private:
  WatchdogSpec spec_;
  MonoClock clock_;
  int64_t last_ok_ms_;
  std::deque<int64_t> kill_times_ms_;
  uint32_t total_kills_ = 0;
};

}  // namespace anthill

#endif  // ANTHILL_SIM_WATCHDOG_H_
