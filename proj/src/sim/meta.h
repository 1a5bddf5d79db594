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
//
// Meta-service names and transactions exposed by every target build: the
// service manager (list/describe/ping) and the introspection service
// (state digest, permission ground truth). Meta requests bypass permission
// checks and never emit coverage feedback, so probes cannot perturb an
// execution's attribution.

#ifndef ANTHILL_SIM_META_H_
#define ANTHILL_SIM_META_H_

#include <cstdint>
#include <string_view>

namespace anthill {

inline constexpr const char* kManagerService = "sys.manager";
inline constexpr uint32_t kTxnListServices = 1;
inline constexpr uint32_t kTxnDescribeService = 2;
inline constexpr uint32_t kTxnPing = 3;

inline constexpr const char* kIntrospectService = "sys.introspect";
inline constexpr uint32_t kTxnStateDigest = 1;
inline constexpr uint32_t kTxnGroundTruth = 2;

inline bool is_meta_service(std::string_view name) {
  return name.rfind("sys.", 0) == 0;
}

}  // namespace anthill

#endif  // ANTHILL_SIM_META_H_
