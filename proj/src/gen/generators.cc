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

#include "gen/generators.h"

#include <algorithm>
#include <cstring>
#include <random>

#include "common/error.h"
#include "gen/decode.h"

namespace anthill {

const char* gen_kind_name(GenKind k) {
  switch (k) {
    case GenKind::kRandFuzz: return "randfuzz";
    case GenKind::kEvoFuzzBB: return "evofuzz_bb";
    case GenKind::kEvoFuzzEvo: return "evofuzz_evo";
    case GenKind::kByteFuzzBB: return "bytefuzz_bb";
    case GenKind::kByteFuzzEvo: return "bytefuzz_evo";
  }
  return "?";
}

std::optional<GenKind> gen_kind_from_name(const std::string& s) {
  if (s == "randfuzz") return GenKind::kRandFuzz;
  if (s == "evofuzz_bb") return GenKind::kEvoFuzzBB;
  if (s == "evofuzz_evo") return GenKind::kEvoFuzzEvo;
  if (s == "bytefuzz_bb") return GenKind::kByteFuzzBB;
  if (s == "bytefuzz_evo") return GenKind::kByteFuzzEvo;
  return std::nullopt;
}

namespace {

const int8_t kInteresting8[] = {-128, -1, 0, 1, 16, 32, 64, 100, 127};
const int16_t kInteresting16[] = {-128, -1, 0, 1, 16, 32, 64, 100, 127,
                                  -32768, -129, 128, 255, 256, 512, 1000,
                                  1024, 4096, 32767};
const int32_t kInteresting32[] = {-128, -1, 0, 1, 16, 32, 64, 100, 127,
                                  -32768, -129, 128, 255, 256, 512, 1000,
                                  1024, 4096, 32767,
                                  -2147483647 - 1, -100663046, -32769, 32768,
                                  65535, 65536, 100663045, 2147483647};

void put_u16(Bytes& b, size_t pos, uint16_t v, bool be) {
  if (be) v = static_cast<uint16_t>((v >> 8) | (v << 8));
  std::memcpy(b.data() + pos, &v, 2);
}

uint16_t get_u16(const Bytes& b, size_t pos, bool be) {
  uint16_t v;
  std::memcpy(&v, b.data() + pos, 2);
  if (be) v = static_cast<uint16_t>((v >> 8) | (v << 8));
  return v;
}

void put_u32(Bytes& b, size_t pos, uint32_t v, bool be) {
  if (be) v = __builtin_bswap32(v);
  std::memcpy(b.data() + pos, &v, 4);
}

uint32_t get_u32(const Bytes& b, size_t pos, bool be) {
  uint32_t v;
  std::memcpy(&v, b.data() + pos, 4);
  if (be) v = __builtin_bswap32(v);
  return v;
}

// --- RandFuzz ---------------------------------------------------------------

class RandFuzzGen : public Generator {
 public:
  RandFuzzGen(uint64_t seed, uint32_t max_payload)
      : rng_(seed), max_payload_(max_payload) {}

  Bytes next(std::optional<ValueList>* decoded) override {
    decoded->reset();
    size_t len = max_payload_ == 0
                     ? 0
                     : static_cast<size_t>(rng_() % (uint64_t{max_payload_} + 1));
    Bytes out(len);
    size_t i = 0;
    while (i + 8 <= len) {
      uint64_t chunk = rng_();
      std::memcpy(out.data() + i, &chunk, 8);
      i += 8;
    }
    for (uint64_t chunk = rng_(); i < len; ++i, chunk >>= 8)
      out[i] = static_cast<uint8_t>(chunk);
    return out;
  }

 private:
  std::mt19937_64 rng_;
  uint32_t max_payload_;
};

// --- EvoFuzz ----------------------------------------------------------------

class EvoFuzzGen : public Generator {
 public:
  EvoFuzzGen(const GenConfig& config, const ApiDescriptor& descriptor, bool evo)
      : typed_(config.seed),
        params_(descriptor.params),
        evo_(evo),
        cap_(config.population) {}

  Bytes next(std::optional<ValueList>* decoded) override {
    ValueList values;
    if (evo_ && !population_.empty()) {
      const Member& parent = tournament();
      values = typed_.mutate_list(parent.values,
                                  1 + static_cast<int>(typed_.rng()() % 4));
    } else {
      // Bootstrap (and the whole of BB mode): fresh typed values.
      values = typed_.generate_list(params_);
    }
    Bytes payload = encode_values(values);
    last_values_ = values;
    last_len_ = payload.size();
    *decoded = std::move(values);
    return payload;
  }

  void observe(const std::optional<FeedbackFrame>& feedback) override {
    if (!evo_ || !feedback) return;
    scratch_.clear();
    fold_edges(feedback->edges, scratch_);
    // Fitness = number of cells whose bucket class was still virgin when
    // this execution arrived; counted before the map-wide claim below.
    uint32_t claims = 0;
    for (const auto& [idx, cnt] : feedback->edges) {
      (void)cnt;
      uint8_t cls = bucket_class(scratch_.counts[idx % kMapSize]);
      if (cls & virgin_.bits[idx % kMapSize]) ++claims;
    }
    auto news = has_new_bits(scratch_.counts, virgin_.bits);
    if (!news || !*news) return;
    Member m;
    m.values = last_values_;
    m.fitness = claims;
    m.trace.reserve(feedback->edges.size());
    for (const auto& [idx, cnt] : feedback->edges) m.trace.push_back(idx);
    m.serialized_len = last_len_;
    m.discovery = discovery_counter_++;
    population_.push_back(std::move(m));
    if (population_.size() > cap_) evict();
  }

  size_t corpus_size() const override { return population_.size(); }

 private:
  struct Member {
    ValueList values;
    uint32_t fitness = 0;  // virgin bits claimed at admission
    std::vector<uint32_t> trace;
    size_t serialized_len = 0;
    uint64_t discovery = 0;
  };

  const Member& tournament() {
    auto& rng = typed_.rng();
    size_t best = rng() % population_.size();
    for (int i = 0; i < 2; ++i) {
      size_t cand = rng() % population_.size();
      if (better(population_[cand], population_[best])) best = cand;
    }
    return population_[best];
  }

  static bool better(const Member& a, const Member& b) {
    if (a.fitness != b.fitness) return a.fitness > b.fitness;
    if (a.serialized_len != b.serialized_len)
      return a.serialized_len < b.serialized_len;
    return a.discovery < b.discovery;
  }

  void evict() {
    // A member is protected while some cell of its trace is covered by no
    // other member; evict the worst unprotected one, or the overall worst
    // when everything is protected (the cap is hard).
    std::map<uint32_t, int> cover;
    for (const auto& m : population_)
      for (uint32_t c : m.trace) ++cover[c];
    int victim = -1;
    for (size_t i = 0; i < population_.size(); ++i) {
      bool unique = false;
      for (uint32_t c : population_[i].trace) {
        if (cover[c] <= 1) {
          unique = true;
          break;
        }
      }
      if (unique) continue;
      if (victim < 0 || better(population_[victim], population_[i]))
        victim = static_cast<int>(i);
    }
    if (victim < 0) {
      victim = 0;
      for (size_t i = 1; i < population_.size(); ++i)
        if (better(population_[victim], population_[i])) victim = static_cast<int>(i);
    }
    population_.erase(population_.begin() + victim);
  }

  TypedGen typed_;
  std::vector<ParamType> params_;
  bool evo_;
  size_t cap_;
  std::vector<Member> population_;
  VirginMap virgin_;
  CoverageMap scratch_;
  ValueList last_values_;
  size_t last_len_ = 0;
  uint64_t discovery_counter_ = 0;
};

// --- ByteFuzz ---------------------------------------------------------------

class ByteFuzzGen : public Generator {
 public:
  ByteFuzzGen(const GenConfig& config, const ApiDescriptor& descriptor, bool evo)
      : rng_(config.seed),
        params_(descriptor.params),
        evo_(evo),
        havoc_cycles_(config.havoc_cycles),
        max_payload_(config.max_payload) {
    for (const auto& p : params_) {
      if (!p.is_primitive())
        throw Error(ErrorKind::kConfig,
                    "byte fuzzing needs a primitive-group API, got param " +
                        p.to_string());
    }
    queue_.push_back(Entry{Bytes(min_encoded_size(params_), 0), false});
  }

  Bytes next(std::optional<ValueList>* decoded) override {
    Bytes child = evo_ ? next_evo() : havoc_child(queue_[0].buf);
    last_child_ = child;
    ValueList values = decode_bytes(child, params_);
    Bytes payload = encode_values(values);
    *decoded = std::move(values);
    return payload;
  }

  void observe(const std::optional<FeedbackFrame>& feedback) override {
    if (!evo_ || !feedback) return;
    scratch_.clear();
    fold_edges(feedback->edges, scratch_);
    auto news = has_new_bits(scratch_.counts, virgin_.bits);
    if (news && *news) queue_.push_back(Entry{last_child_, false});
  }

  size_t corpus_size() const override { return queue_.size(); }

 private:
  struct Entry {
    Bytes buf;
    bool det_done = false;
  };

  Bytes next_evo() {
    for (;;) {
      Entry& e = queue_[cur_];
      if (!e.det_done) {
        if (!det_) det_.emplace(e.buf);
        if (auto child = det_->next()) return *child;
        e.det_done = true;
        det_.reset();
        havoc_done_ = 0;
      }
      if (havoc_done_ < havoc_cycles_) {
        ++havoc_done_;
        return havoc_child(e.buf);
      }
      cur_ = (cur_ + 1) % queue_.size();
      havoc_done_ = 0;
      det_.reset();
    }
  }

  Bytes havoc_child(const Bytes& base) {
    Bytes b = base;
    int stack = 1 << (1 + rng_() % 7);  // 2..128 stacked mutations
    for (int i = 0; i < stack; ++i) {
      switch (rng_() % 9) {
        case 0:
          if (!b.empty()) {
            size_t bit = rng_() % (b.size() * 8);
            b[bit / 8] ^= static_cast<uint8_t>(0x80 >> (bit % 8));
          }
          break;
        case 1:
          if (!b.empty()) b[rng_() % b.size()] = static_cast<uint8_t>(rng_());
          break;
        case 2:
          if (!b.empty())
            b[rng_() % b.size()] =
                static_cast<uint8_t>(kInteresting8[rng_() % 9]);
          break;
        case 3:
          if (!b.empty()) {
            uint8_t delta = static_cast<uint8_t>(rng_() % kArithMax + 1);
            size_t pos = rng_() % b.size();
            b[pos] = (rng_() & 1) ? b[pos] + delta : b[pos] - delta;
          }
          break;
        case 4:
          if (b.size() >= 2) {
            size_t pos = rng_() % (b.size() - 1);
            put_u16(b, pos, static_cast<uint16_t>(kInteresting16[rng_() % 19]),
                    rng_() & 1);
          }
          break;
        case 5:
          if (b.size() > 1) {
            size_t pos = rng_() % b.size();
            size_t len = 1 + rng_() % std::min<size_t>(b.size() - pos, 16);
            b.erase(b.begin() + pos, b.begin() + pos + len);
          }
          break;
        case 6: {
          if (b.size() >= max_payload_) break;
          size_t len = 1 + rng_() % 16;
          size_t pos = b.empty() ? 0 : rng_() % (b.size() + 1);
          Bytes chunk(len);
          for (auto& x : chunk) x = static_cast<uint8_t>(rng_());
          b.insert(b.begin() + pos, chunk.begin(), chunk.end());
          break;
        }
        case 7:
          if (!b.empty() && b.size() < max_payload_) {
            size_t pos = rng_() % b.size();
            size_t len = 1 + rng_() % std::min<size_t>(b.size() - pos, 16);
            Bytes chunk(b.begin() + pos, b.begin() + pos + len);
            b.insert(b.begin() + pos, chunk.begin(), chunk.end());
          }
          break;
        case 8:
          if (!b.empty()) {
            size_t pos = rng_() % b.size();
            size_t len = 1 + rng_() % std::min<size_t>(b.size() - pos, 16);
            uint8_t fill = static_cast<uint8_t>(rng_());
            std::fill(b.begin() + pos, b.begin() + pos + len, fill);
          }
          break;
      }
      if (b.size() > max_payload_) b.resize(max_payload_);
    }
    return b;
  }

  std::mt19937_64 rng_;
  std::vector<ParamType> params_;
  bool evo_;
  uint32_t havoc_cycles_;
  uint32_t max_payload_;
  std::vector<Entry> queue_;
  size_t cur_ = 0;
  uint32_t havoc_done_ = 0;
  std::optional<DetStageIter> det_;
  Bytes last_child_;
  VirginMap virgin_;
  CoverageMap scratch_;
};

}  // namespace

// --- Deterministic stage iterator -------------------------------------------

std::optional<Bytes> DetStageIter::next() {
  const size_t len = buf_.size();
  const size_t bits = len * 8;
  auto flip = [&](Bytes& b, size_t bit) {
    b[bit / 8] ^= static_cast<uint8_t>(0x80 >> (bit % 8));
  };
  for (;;) {
    switch (stage_) {
      case Stage::kBitflip1: {
        if (pos_ < bits) {
          Bytes b = buf_;
          flip(b, pos_);
          ++pos_;
          return b;
        }
        stage_ = Stage::kBitflip2;
        pos_ = 0;
        break;
      }
      case Stage::kBitflip2: {
        if (bits >= 2 && pos_ < bits - 1) {
          Bytes b = buf_;
          flip(b, pos_);
          flip(b, pos_ + 1);
          ++pos_;
          return b;
        }
        stage_ = Stage::kBitflip4;
        pos_ = 0;
        break;
      }
      case Stage::kBitflip4: {
        if (bits >= 4 && pos_ < bits - 3) {
          Bytes b = buf_;
          for (size_t i = 0; i < 4; ++i) flip(b, pos_ + i);
          ++pos_;
          return b;
        }
        stage_ = Stage::kByteflip1;
        pos_ = 0;
        break;
      }
      case Stage::kByteflip1: {
        if (pos_ < len) {
          Bytes b = buf_;
          b[pos_] ^= 0xFF;
          ++pos_;
          return b;
        }
        stage_ = Stage::kByteflip2;
        pos_ = 0;
        break;
      }
      case Stage::kByteflip2: {
        if (len >= 2 && pos_ < len - 1) {
          Bytes b = buf_;
          b[pos_] ^= 0xFF;
          b[pos_ + 1] ^= 0xFF;
          ++pos_;
          return b;
        }
        stage_ = Stage::kByteflip4;
        pos_ = 0;
        break;
      }
      case Stage::kByteflip4: {
        if (len >= 4 && pos_ < len - 3) {
          Bytes b = buf_;
          for (size_t i = 0; i < 4; ++i) b[pos_ + i] ^= 0xFF;
          ++pos_;
          return b;
        }
        stage_ = Stage::kArith8;
        pos_ = sub_ = 0;
        break;
      }
      case Stage::kArith8: {
        if (pos_ < len) {
          if (sub_ < 2 * kArithMax) {
            Bytes b = buf_;
            uint8_t delta = static_cast<uint8_t>(sub_ / 2 + 1);
            b[pos_] = (sub_ & 1) ? b[pos_] - delta : b[pos_] + delta;
            ++sub_;
            return b;
          }
          sub_ = 0;
          ++pos_;
          break;
        }
        stage_ = Stage::kArith16;
        pos_ = sub_ = 0;
        break;
      }
      case Stage::kArith16: {
        if (len >= 2 && pos_ < len - 1) {
          if (sub_ < 4 * kArithMax) {
            Bytes b = buf_;
            uint16_t delta = static_cast<uint16_t>(sub_ / 4 + 1);
            bool minus = sub_ & 1;
            bool be = sub_ & 2;
            uint16_t v = get_u16(b, pos_, be);
            put_u16(b, pos_, minus ? v - delta : v + delta, be);
            ++sub_;
            return b;
          }
          sub_ = 0;
          ++pos_;
          break;
        }
        stage_ = Stage::kArith32;
        pos_ = sub_ = 0;
        break;
      }
      case Stage::kArith32: {
        if (len >= 4 && pos_ < len - 3) {
          if (sub_ < 4 * kArithMax) {
            Bytes b = buf_;
            uint32_t delta = static_cast<uint32_t>(sub_ / 4 + 1);
            bool minus = sub_ & 1;
            bool be = sub_ & 2;
            uint32_t v = get_u32(b, pos_, be);
            put_u32(b, pos_, minus ? v - delta : v + delta, be);
            ++sub_;
            return b;
          }
          sub_ = 0;
          ++pos_;
          break;
        }
        stage_ = Stage::kInterest8;
        pos_ = sub_ = 0;
        break;
      }
      case Stage::kInterest8: {
        if (pos_ < len) {
          if (sub_ < 9) {
            Bytes b = buf_;
            b[pos_] = static_cast<uint8_t>(kInteresting8[sub_]);
            ++sub_;
            return b;
          }
          sub_ = 0;
          ++pos_;
          break;
        }
        stage_ = Stage::kInterest16;
        pos_ = sub_ = 0;
        break;
      }
      case Stage::kInterest16: {
        if (len >= 2 && pos_ < len - 1) {
          if (sub_ < 2 * 19) {
            Bytes b = buf_;
            put_u16(b, pos_, static_cast<uint16_t>(kInteresting16[sub_ / 2]),
                    sub_ & 1);
            ++sub_;
            return b;
          }
          sub_ = 0;
          ++pos_;
          break;
        }
        stage_ = Stage::kInterest32;
        pos_ = sub_ = 0;
        break;
      }
      case Stage::kInterest32: {
        if (len >= 4 && pos_ < len - 3) {
          if (sub_ < 2 * 27) {
            Bytes b = buf_;
            put_u32(b, pos_, static_cast<uint32_t>(kInteresting32[sub_ / 2]),
                    sub_ & 1);
            ++sub_;
            return b;
          }
          sub_ = 0;
          ++pos_;
          break;
        }
        stage_ = Stage::kDone;
        break;
      }
      case Stage::kDone:
        return std::nullopt;
    }
  }
}

std::unique_ptr<Generator> make_generator(const GenConfig& config,
                                          const ApiDescriptor* descriptor) {
  switch (config.kind) {
    case GenKind::kRandFuzz:
      return std::make_unique<RandFuzzGen>(config.seed, config.max_payload);
    case GenKind::kEvoFuzzBB:
    case GenKind::kEvoFuzzEvo:
      if (!descriptor)
        throw Error(ErrorKind::kConfig, "evofuzz needs an API descriptor");
      return std::make_unique<EvoFuzzGen>(config, *descriptor,
                                          config.kind == GenKind::kEvoFuzzEvo);
    case GenKind::kByteFuzzBB:
    case GenKind::kByteFuzzEvo:
      if (!descriptor)
        throw Error(ErrorKind::kConfig, "bytefuzz needs an API descriptor");
      return std::make_unique<ByteFuzzGen>(config, *descriptor,
                                           config.kind == GenKind::kByteFuzzEvo);
  }
  throw Error(ErrorKind::kConfig, "unknown generator kind");
}

}  // namespace anthill
