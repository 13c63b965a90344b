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

#include "stackfuzz/mutation.hpp"

#include <algorithm>

namespace stackfuzz {

namespace {

// The classic "interesting" constants, stored unsigned. The wider pools
// extend the narrower ones.
constexpr uint8_t kInteresting8[] = {128, 255, 0, 1, 16, 32, 64, 100, 127};
constexpr uint16_t kInteresting16[] = {32768, 65407, 128,  255,  256,
                                       512,   1000,  1024, 4096, 32767};
constexpr uint32_t kInteresting32[] = {
    2147483648u, 4194304250u, 4294934527u, 32768u,
    65535u,      65536u,      100663045u,  2147483647u};

void FlipBit(std::vector<uint8_t>& data, Rng& rng) {
  uint64_t bit = rng.Below(data.size() * 8);
  data[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
}

void FlipByte(std::vector<uint8_t>& data, Rng& rng) {
  data[rng.Below(data.size())] ^= 0xFF;
}

void ArithAddSub(std::vector<uint8_t>& data, Rng& rng) {
  size_t pos = rng.Below(data.size());
  uint8_t delta = static_cast<uint8_t>(1 + rng.Below(35));
  if (rng.Chance(1, 2)) {
    data[pos] = static_cast<uint8_t>(data[pos] + delta);
  } else {
    data[pos] = static_cast<uint8_t>(data[pos] - delta);
  }
}

void InterestingSubstitute(std::vector<uint8_t>& data, Rng& rng) {
  size_t widths[3];
  size_t nwidths = 0;
  for (size_t w : {size_t{1}, size_t{2}, size_t{4}}) {
    if (data.size() >= w) widths[nwidths++] = w;
  }
  size_t width = widths[rng.Below(nwidths)];
  size_t pos = rng.Below(data.size() - width + 1);
  uint32_t value = 0;
  switch (width) {
    case 1:
      value = kInteresting8[rng.Below(std::size(kInteresting8))];
      break;
    case 2: {
      uint64_t pick =
          rng.Below(std::size(kInteresting8) + std::size(kInteresting16));
      value = pick < std::size(kInteresting8)
                  ? kInteresting8[pick]
                  : kInteresting16[pick - std::size(kInteresting8)];
      break;
    }
    default: {
      uint64_t pick = rng.Below(std::size(kInteresting8) +
                                std::size(kInteresting16) +
                                std::size(kInteresting32));
      if (pick < std::size(kInteresting8)) {
        value = kInteresting8[pick];
      } else if (pick < std::size(kInteresting8) + std::size(kInteresting16)) {
        value = kInteresting16[pick - std::size(kInteresting8)];
      } else {
        value = kInteresting32[pick - std::size(kInteresting8) -
                               std::size(kInteresting16)];
      }
      break;
    }
  }
  bool big_endian = width > 1 && rng.Chance(1, 2);
  for (size_t i = 0; i < width; ++i) {
    size_t shift = big_endian ? (width - 1 - i) : i;
    data[pos + i] = static_cast<uint8_t>(value >> (8 * shift));
  }
}

void DeleteSpan(std::vector<uint8_t>& data, Rng& rng) {
  size_t span = 1 + rng.Below(data.size());
  size_t start = rng.Below(data.size() - span + 1);
  data.erase(data.begin() + static_cast<ptrdiff_t>(start),
             data.begin() + static_cast<ptrdiff_t>(start + span));
}

void InsertRandom(std::vector<uint8_t>& data, Rng& rng) {
  size_t count = 1 + rng.Below(16);
  size_t pos = rng.Below(data.size() + 1);
  std::vector<uint8_t> fresh(count);
  for (uint8_t& b : fresh) b = rng.Byte();
  data.insert(data.begin() + static_cast<ptrdiff_t>(pos), fresh.begin(),
              fresh.end());
}

void DuplicateSpan(std::vector<uint8_t>& data, Rng& rng) {
  size_t span = 1 + rng.Below(data.size());
  size_t start = rng.Below(data.size() - span + 1);
  std::vector<uint8_t> copy(data.begin() + static_cast<ptrdiff_t>(start),
                            data.begin() + static_cast<ptrdiff_t>(start + span));
  size_t pos = rng.Below(data.size() + 1);
  data.insert(data.begin() + static_cast<ptrdiff_t>(pos), copy.begin(),
              copy.end());
}

// One non-stacked mutation step; falls back to insertion when empty.
void ApplyBasic(MutatorKind kind, std::vector<uint8_t>& data, Rng& rng) {
  if (data.empty()) kind = MutatorKind::kInsertRandom;
  switch (kind) {
    case MutatorKind::kBitFlip: FlipBit(data, rng); break;
    case MutatorKind::kByteFlip: FlipByte(data, rng); break;
    case MutatorKind::kArithAddSub: ArithAddSub(data, rng); break;
    case MutatorKind::kInterestingSubstitute:
      InterestingSubstitute(data, rng);
      break;
    case MutatorKind::kDeleteSpan: DeleteSpan(data, rng); break;
    case MutatorKind::kInsertRandom: InsertRandom(data, rng); break;
    case MutatorKind::kDuplicateSpan: DuplicateSpan(data, rng); break;
    case MutatorKind::kHavocStack: break;  // never reached
  }
}

}  // namespace

std::vector<uint8_t> Mutate(std::span<const uint8_t> input, Rng& rng,
                            const MutationConfig& config, MutationStats* stats,
                            MutatorKind* chosen) {
  size_t cap = std::min(2 * input.size() + 16, config.max_input_len);
  std::vector<uint8_t> out(input.begin(), input.end());

  MutatorKind kind = static_cast<MutatorKind>(rng.Below(kMutatorKindCount));
  if (out.empty() && kind != MutatorKind::kHavocStack) {
    kind = MutatorKind::kInsertRandom;
  }
  if (stats) ++stats->kind_draws[static_cast<size_t>(kind)];
  if (chosen) *chosen = kind;

  auto clamp = [&] {
    if (out.size() > cap) {
      out.resize(cap);
      if (stats) ++stats->truncations;
    }
  };

  if (kind == MutatorKind::kHavocStack) {
    uint64_t steps = uint64_t{2} << rng.Below(7);  // 2, 4, ..., 128
    for (uint64_t i = 0; i < steps; ++i) {
      MutatorKind sub =
          static_cast<MutatorKind>(rng.Below(kMutatorKindCount - 1));
      ApplyBasic(sub, out, rng);
      clamp();
    }
  } else {
    ApplyBasic(kind, out, rng);
    clamp();
  }
  return out;
}

}  // namespace stackfuzz
