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

#ifndef ANTHILL_COMMON_CLOCK_H_
#define ANTHILL_COMMON_CLOCK_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <thread>

namespace anthill {

// Wall clock, microseconds since epoch. Used for timestamps persisted into
// artifacts (input records, leases, heartbeats).
inline int64_t now_us() {
  return std::chrono::duration_cast<std::chrono::microseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

inline double now_s() { return static_cast<double>(now_us()) / 1e6; }

// Monotonic milliseconds, for deadlines and intervals.
inline int64_t mono_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

inline void sleep_ms(int64_t ms) {
  std::this_thread::sleep_for(std::chrono::milliseconds(ms));
}

// Injectable monotonic clock for components whose timing logic is unit
// tested with a fake (watchdog, lease expiry).
using MonoClock = std::function<int64_t()>;

inline MonoClock real_mono_clock() {
  return [] { return mono_ms(); };
}

}  // namespace anthill

#endif  // ANTHILL_COMMON_CLOCK_H_
