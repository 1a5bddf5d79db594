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
// Delta debugging (ddmin) with binary-partition granularity doubling. The
// result is 1-minimal: removing any single remaining element makes the check
// fail. Worst case O(n^2) check invocations.

#ifndef ANTHILL_VERIFY_DDMIN_H_
#define ANTHILL_VERIFY_DDMIN_H_

#include <cstddef>
#include <functional>
#include <vector>

namespace anthill {

// check(subset-indices) returns true when the subset still triggers the
// failure. Indices are always in ascending order (relative order of the
// original list is preserved).
using DdminCheck = std::function<bool(const std::vector<size_t>&)>;

struct DdminResult {
  std::vector<size_t> minimal;
  size_t check_calls = 0;
};

// Minimizes {0..n-1}. Precondition checked: check(full) must hold, else
// throws Error(kValidation, "not reproducible..."). n == 0 is rejected the
// same way.
DdminResult ddmin_indices(size_t n, const DdminCheck& check);

template <typename T>
std::vector<T> ddmin_list(const std::vector<T>& items,
                          const std::function<bool(const std::vector<T>&)>& check,
                          size_t* check_calls = nullptr) {
  auto res = ddmin_indices(items.size(), [&](const std::vector<size_t>& idx) {
    std::vector<T> subset;
    subset.reserve(idx.size());
    for (size_t i : idx) subset.push_back(items[i]);
    return check(subset);
  });
  if (check_calls) *check_calls = res.check_calls;
  std::vector<T> out;
  out.reserve(res.minimal.size());
  for (size_t i : res.minimal) out.push_back(items[i]);
  return out;
}

}  // namespace anthill

#endif  // ANTHILL_VERIFY_DDMIN_H_
