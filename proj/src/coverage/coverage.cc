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

#include "coverage/coverage.h"

#include <cstdio>
#include <cstring>

#include "common/error.h"

namespace anthill {

uint8_t bucket_class(uint32_t raw_count) {
  if (raw_count == 0) return 0;
  if (raw_count == 1) return 1;
  if (raw_count == 2) return 2;
  if (raw_count == 3) return 4;
  if (raw_count <= 7) return 8;
  if (raw_count <= 15) return 16;
  if (raw_count <= 31) return 32;
  if (raw_count <= 127) return 64;
  return 128;
}

size_t CoverageMap::nonzero_cells() const {
  size_t n = 0;
  for (uint8_t c : counts) n += (c != 0);
  return n;
}

void record_edge(uint64_t prev_block, uint64_t cur_block, CoverageMap& map) {
  uint8_t& cell = map.counts[edge_index(prev_block, cur_block)];
  if (cell != 0xFF) ++cell;
}

void fold_edges(std::span<const std::pair<uint32_t, uint32_t>> edges,
                CoverageMap& map) {
  for (const auto& [idx, count] : edges) {
    uint32_t sum = map.counts[idx % kMapSize] + count;
    map.counts[idx % kMapSize] = sum > 0xFF ? 0xFF : static_cast<uint8_t>(sum);
  }
}

std::optional<bool> has_new_bits(std::span<const uint8_t> counts,
                                 std::span<uint8_t> virgin) {
  if (counts.size() != virgin.size()) return std::nullopt;
  bool found = false;
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    uint8_t cls = bucket_class(counts[i]);
    if (cls & virgin[i]) {
      found = true;
      virgin[i] &= static_cast<uint8_t>(~cls);
    }
  }
  return found;
}

bool has_new_bits_sparse(std::span<const std::pair<uint32_t, uint32_t>> edges,
                         VirginMap& virgin) {
  bool found = false;
  for (const auto& [idx, count] : edges) {
    uint8_t cls = bucket_class(count);
    uint8_t& v = virgin.bits[idx % kMapSize];
    if (cls & v) {
      found = true;
      v &= static_cast<uint8_t>(~cls);
    }
  }
  return found;
}

uint32_t count_new_bits_sparse(
    std::span<const std::pair<uint32_t, uint32_t>> edges,
    const VirginMap& virgin) {
  uint32_t n = 0;
  for (const auto& [idx, count] : edges) {
    uint8_t cls = bucket_class(count);
    if (cls & virgin.bits[idx % kMapSize]) ++n;
  }
  return n;
}

std::array<uint8_t, kMapSize> classify_map(const CoverageMap& map) {
  std::array<uint8_t, kMapSize> out;
  for (size_t i = 0; i < kMapSize; ++i) out[i] = bucket_class(map.counts[i]);
  return out;
}

void write_coverage_file(const std::filesystem::path& path,
                         const CoverageMap& map) {
  auto classified = classify_map(map);
  FILE* f = fopen(path.c_str(), "wb");
  if (!f) throw Error(ErrorKind::kInfra, "cannot write " + path.string());
  fwrite(classified.data(), 1, classified.size(), f);
  fclose(f);
}

std::optional<std::array<uint8_t, kMapSize>> read_coverage_file(
    const std::filesystem::path& path) {
  FILE* f = fopen(path.c_str(), "rb");
  if (!f) return std::nullopt;
  std::array<uint8_t, kMapSize> out{};
  size_t n = fread(out.data(), 1, out.size(), f);
  fclose(f);
  if (n != out.size()) return std::nullopt;
  return out;
}

std::optional<double> coverage_fraction(uint32_t blocks_hit,
                                        uint32_t block_universe) {
  if (block_universe == 0) return std::nullopt;
  double f = static_cast<double>(blocks_hit) / block_universe;
  return f > 1.0 ? 1.0 : f;
}

}  // namespace anthill
