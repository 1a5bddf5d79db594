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

#ifndef ANTHILL_COMMON_ERROR_H_
#define ANTHILL_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace anthill {

// Error taxonomy shared across the platform. `Retryable` marks transient
// conditions (connection refused, port clash) that callers may retry;
// everything else is terminal for the current operation.
enum class ErrorKind {
  kConfig,     // bad configuration or CLI usage
  kValidation, // input file violates an invariant (duplicate keys etc.)
  kProtocol,   // malformed wire traffic or reply
  kRetryable,  // transient infrastructure condition
  kInfra,      // non-transient infrastructure failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kProtocol: return "protocol";
    case ErrorKind::kRetryable: return "retryable";
    case ErrorKind::kInfra: return "infra";
  }
  return "unknown";
}

}  // namespace anthill

#endif  // ANTHILL_COMMON_ERROR_H_
