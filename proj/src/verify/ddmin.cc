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

#include "verify/ddmin.h"

#include <algorithm>

#include "common/error.h"

namespace anthill {

namespace {

std::vector<std::vector<size_t>> split(const std::vector<size_t>& items,
                                       size_t parts) {
  std::vector<std::vector<size_t>> out;
  out.reserve(parts);
  size_t base = items.size() / parts;
  size_t extra = items.size() % parts;
  size_t pos = 0;
  for (size_t i = 0; i < parts; ++i) {
    size_t len = base + (i < extra ? 1 : 0);
    out.emplace_back(items.begin() + pos, items.begin() + pos + len);
    pos += len;
  }
  return out;
}

std::vector<size_t> complement_of(const std::vector<size_t>& items,
                                  const std::vector<size_t>& subset) {
  std::vector<size_t> out;
  out.reserve(items.size() - subset.size());
  size_t j = 0;
  for (size_t v : items) {
    if (j < subset.size() && subset[j] == v) {
      ++j;
      continue;
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

DdminResult ddmin_indices(size_t n, const DdminCheck& check) {
  DdminResult res;
  std::vector<size_t> cur(n);
  for (size_t i = 0; i < n; ++i) cur[i] = i;

  auto run_check = [&](const std::vector<size_t>& subset) {
    ++res.check_calls;
    return check(subset);
  };

  if (n == 0 || !run_check(cur))
    throw Error(ErrorKind::kValidation, "not reproducible, nothing to minify");

  size_t granularity = 2;
  while (cur.size() >= 2) {
    auto subsets = split(cur, std::min(granularity, cur.size()));
    bool reduced = false;

    // Reduce to subset.
    for (const auto& subset : subsets) {
      if (subset.empty() || subset.size() == cur.size()) continue;
      if (run_check(subset)) {
        cur = subset;
        granularity = 2;
        reduced = true;
        break;
      }
    }
    if (reduced) continue;

    // Reduce to complement.
    for (const auto& subset : subsets) {
      if (subset.empty()) continue;
      auto comp = complement_of(cur, subset);
      if (comp.empty()) continue;
      if (run_check(comp)) {
        cur = comp;
        granularity = std::max<size_t>(granularity - 1, 2);
        reduced = true;
        break;
      }
    }
    if (reduced) continue;

    // Increase granularity.
    if (granularity < cur.size()) {
      granularity = std::min(cur.size(), granularity * 2);
      continue;
    }
    break;  // finest granularity and nothing removable: 1-minimal
  }

  res.minimal = std::move(cur);
  return res;
}

}  // namespace anthill
