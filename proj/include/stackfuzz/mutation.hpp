// Copyright 2026 The Stackfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Havoc-style byte mutators. The classic core set: flips, small arithmetic,
// interesting-value substitution, span deletion/duplication, random
// insertion, and a stacked composition of the others.

#ifndef STACKFUZZ_MUTATION_HPP_
#define STACKFUZZ_MUTATION_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "stackfuzz/rng.hpp"

namespace stackfuzz {

enum class MutatorKind : uint8_t {
  kBitFlip,
  kByteFlip,
  kArithAddSub,
  kInterestingSubstitute,
  kDeleteSpan,
  kInsertRandom,
  kDuplicateSpan,
  kHavocStack,
};
inline constexpr size_t kMutatorKindCount = 8;

struct MutationConfig {
  size_t max_input_len = 4096;
};

struct MutationStats {
  std::array<uint64_t, kMutatorKindCount> kind_draws{};
  uint64_t truncations = 0;
};

// One mutated child of `input`. Picks a MutatorKind uniformly (an empty
// input forces the insertion path); havoc applies a power-of-two count in
// [2, 128] of the other kinds back to back. Output length stays within
// [0, 2*len(input) + 16] and never exceeds max_input_len (truncation is
// counted in stats). Deterministic given the rng state.
std::vector<uint8_t> Mutate(std::span<const uint8_t> input, Rng& rng,
                            const MutationConfig& config,
                            MutationStats* stats = nullptr,
                            MutatorKind* chosen = nullptr);

}  // namespace stackfuzz

#endif  // STACKFUZZ_MUTATION_HPP_
