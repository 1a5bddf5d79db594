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
// Type-aware value generation and mutation for the evolutionary fuzzer.
// Fresh generation mixes boundary values into uniform draws (20% boundary
// weight for integers); mutation applies small arithmetic steps, boundary
// substitution, string insert/delete/duplicate/splice, and blob bit flips.
// Composites recurse one level.

#ifndef ANTHILL_GEN_TYPED_H_
#define ANTHILL_GEN_TYPED_H_

#include <random>
#include <vector>

#include "wire/value.h"

namespace anthill {

inline constexpr double kIntBoundaryWeight = 0.20;

class TypedGen {
 public:
  explicit TypedGen(uint64_t seed) : rng_(seed) {}

  Value generate(const ParamType& type);
  ValueList generate_list(const std::vector<ParamType>& params);

  // Applies `count` stacked mutations across the vector (each picks a random
  // element). Throws Error(kConfig) on unsupported tags.
  ValueList mutate_list(const ValueList& parent, int count);

  std::mt19937_64& rng() { return rng_; }

 private:
  void mutate(Value& v);
  uint64_t u64() { return rng_(); }
  double unit() { return std::uniform_real_distribution<double>(0, 1)(rng_); }

  std::mt19937_64 rng_;
};

}  // namespace anthill

#endif  // ANTHILL_GEN_TYPED_H_
