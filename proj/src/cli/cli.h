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

#ifndef ANTHILL_CLI_CLI_H_
#define ANTHILL_CLI_CLI_H_

namespace anthill {

// Exit codes: 0 success, 2 configuration error, 3 campaign ran but the
// acceptance check failed, 4 infrastructure failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitAcceptance = 3;
inline constexpr int kExitInfra = 4;

int run_cli(int argc, char** argv);

}  // namespace anthill

#endif  // ANTHILL_CLI_CLI_H_
