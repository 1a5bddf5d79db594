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
// Bucketed edge-coverage map in the classic coverage-guided-fuzzer shape:
// 64 KiB of saturating hit counters, hit counts classified into eight
// buckets, and a virgin map tracking which bucket classes have ever been
// seen per cell. "New coverage" means some cell produced a bucket class the
// virgin map has not recorded yet.

#ifndef ANTHILL_COVERAGE_COVERAGE_H_
#define ANTHILL_COVERAGE_COVERAGE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "common/hash.h"

namespace anthill {

inline constexpr size_t kMapSize = 65536;

// Raw count -> bucket class bit. Buckets: 1, 2, 3, 4-7, 8-15, 16-31, 32-127,
// 128+ mapped to bits 1,2,4,8,16,32,64,128. Zero stays zero.
uint8_t bucket_class(uint32_t raw_count);

struct CoverageMap {
  std::array<uint8_t, kMapSize> counts{};  // saturating raw hit counters

  void clear() { counts.fill(0); }
  size_t nonzero_cells() const;
};

struct VirginMap {
  std::array<uint8_t, kMapSize> bits;
  VirginMap() { bits.fill(0xFF); }
};

// Fixed 64-bit mix of a block id; the entry pseudo-block has id 0.
inline uint64_t block_hash(uint64_t block_id) { return mix64(block_id); }

inline uint32_t edge_index(uint64_t prev_block, uint64_t cur_block) {
  return static_cast<uint32_t>(((block_hash(prev_block) >> 1) ^
                                block_hash(cur_block)) %
                               kMapSize);
}

// Increment the counter for edge (prev, cur), saturating at 255.
void record_edge(uint64_t prev_block, uint64_t cur_block, CoverageMap& map);

// Fold per-execution (edge index, raw count) pairs into a cumulative map,
// saturating addition per cell.
void fold_edges(std::span<const std::pair<uint32_t, uint32_t>> edges,
                CoverageMap& map);

// Whole-map form: true iff some cell's bucket class is unseen in virgin;
// virgin is updated. nullopt when the spans disagree on size.
std::optional<bool> has_new_bits(std::span<const uint8_t> counts,
                                 std::span<uint8_t> virgin);

// Sparse form over one execution's deduplicated edge trace; same virgin
// semantics as the whole-map form.
bool has_new_bits_sparse(std::span<const std::pair<uint32_t, uint32_t>> edges,
                         VirginMap& virgin);
// Like has_new_bits_sparse but only counts: how many virgin bits this trace
// would claim. Does not update virgin.
uint32_t count_new_bits_sparse(
    std::span<const std::pair<uint32_t, uint32_t>> edges,
    const VirginMap& virgin);

// Bucketed view of a raw-count map. This is the representation persisted to
// coverage.bin (exactly kMapSize bytes) and compared bit-exactly by the
// replay-determinism checks.
std::array<uint8_t, kMapSize> classify_map(const CoverageMap& map);

void write_coverage_file(const std::filesystem::path& path, const CoverageMap& map);
std::optional<std::array<uint8_t, kMapSize>> read_coverage_file(
    const std::filesystem::path& path);

// Fraction of an API's blocks touched across a session, from the cumulative
// distinct-block count carried in feedback frames. nullopt when the universe
// is unknown (0), mirroring APIs without coverage info.
std::optional<double> coverage_fraction(uint32_t blocks_hit,
                                        uint32_t block_universe);

}  // namespace anthill

#endif  // ANTHILL_COVERAGE_COVERAGE_H_
