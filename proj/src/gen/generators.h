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
// The three integrated input generators.
//
//   RandFuzz     — black-box random byte payloads sent raw; the target is
//                  free to reject them as BadParcel, that is the point.
//   EvoFuzz      — typed generator (supports the complex group). BB mode
//                  draws fresh values; Evo mode evolves a population under
//                  coverage fitness with type-aware mutations.
//   ByteFuzz     — byte-buffer mutation over a queue (deterministic bit/byte
//                  flip, arithmetic and interesting-value stages, then
//                  stacked havoc), translated to typed values before hitting
//                  the wire. Evo mode grows the queue on new coverage; BB
//                  mode is havoc-only with a constant queue.
//
// With feedback disabled, every BB-mode input sequence is a pure function of
// (kind, seed, descriptor).

#ifndef ANTHILL_GEN_GENERATORS_H_
#define ANTHILL_GEN_GENERATORS_H_

#include <memory>
#include <optional>
#include <string>

#include "coverage/coverage.h"
#include "gen/typed.h"
#include "surface/surface.h"
#include "wire/frame.h"

namespace anthill {

enum class GenKind {
  kRandFuzz,
  kEvoFuzzBB,
  kEvoFuzzEvo,
  kByteFuzzBB,
  kByteFuzzEvo,
};

const char* gen_kind_name(GenKind k);
std::optional<GenKind> gen_kind_from_name(const std::string& s);

struct GenConfig {
  GenKind kind = GenKind::kRandFuzz;
  uint64_t seed = 1;
  uint32_t max_payload = 4096;
  uint32_t population = 50;    // EvoFuzz population cap
  uint32_t havoc_cycles = 256; // ByteFuzz havoc children per queue entry
};

class Generator {
 public:
  virtual ~Generator() = default;

  // Produces the next wire payload. Typed generators also report the decoded
  // value vector for the input record.
  virtual Bytes next(std::optional<ValueList>* decoded) = 0;

  // Called after the execution with its coverage feedback (absent on vanilla
  // targets or lost pairing). Evolutionary modes admit inputs here.
  virtual void observe(const std::optional<FeedbackFrame>& feedback) {}

  virtual size_t corpus_size() const { return 0; }
};

// `descriptor` may be null for RandFuzz; ByteFuzz requires a primitive-group
// descriptor and EvoFuzz any descriptor. Throws Error(kConfig) otherwise.
std::unique_ptr<Generator> make_generator(const GenConfig& config,
                                          const ApiDescriptor* descriptor);

// Deterministic-stage iterator of ByteFuzz, exposed for tests: yields every
// child of one buffer in the canonical order (bit flips 1/2/4 MSB-first,
// byte flips 1/2/4, 8/16/32-bit arithmetic +/-1..35, interesting-value
// substitution), then ends.
class DetStageIter {
 public:
  explicit DetStageIter(Bytes buf) : buf_(std::move(buf)) {}
  std::optional<Bytes> next();

 private:
  enum class Stage {
    kBitflip1, kBitflip2, kBitflip4,
    kByteflip1, kByteflip2, kByteflip4,
    kArith8, kArith16, kArith32,
    kInterest8, kInterest16, kInterest32,
    kDone,
  };
  Bytes buf_;
  Stage stage_ = Stage::kBitflip1;
  size_t pos_ = 0;
  size_t sub_ = 0;
};

inline constexpr int kArithMax = 35;

}  // namespace anthill

#endif  // ANTHILL_GEN_GENERATORS_H_
