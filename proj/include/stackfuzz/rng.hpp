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

#ifndef STACKFUZZ_RNG_HPP_
#define STACKFUZZ_RNG_HPP_

#include <cstdint>

namespace stackfuzz {

// xoshiro256** seeded through splitmix64. Hand-rolled on purpose: standard
// <random> distributions differ across library implementations, and campaign
// reproducibility across platforms depends on every draw being identical.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t Next();

  // Uniform in [0, n). n == 0 returns 0. Fixed-point bounded draw
  // (128-bit multiply-shift), not modulo, so results are portable and
  // bias stays below 2^-64.
  uint64_t Below(uint64_t n);

  uint8_t Byte() { return static_cast<uint8_t>(Next() >> 56); }
  bool Chance(uint64_t num, uint64_t den) { return Below(den) < num; }

 private:
  uint64_t s_[4];
};

uint64_t SplitMix64(uint64_t& state);

}  // namespace stackfuzz

#endif  // STACKFUZZ_RNG_HPP_
