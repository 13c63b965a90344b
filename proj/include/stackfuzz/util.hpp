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

#ifndef STACKFUZZ_UTIL_HPP_
#define STACKFUZZ_UTIL_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stackfuzz {

// Raised on malformed benchmark documents; `what()` names the offending path.
class DocumentError : public std::runtime_error {
 public:
  explicit DocumentError(const std::string& msg) : std::runtime_error(msg) {}
};

// Strict hex codec for witness inputs, seed inputs and crash dumps.
// Parsing requires an even number of [0-9a-fA-F] digits.
std::string FormatHex(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> ParseHex(std::string_view hex);

// FNV-1a, used for trace dedup buckets and per-repetition seed derivation.
// Fixed algorithm, identical on every platform (never std::hash).
uint64_t Fnv1a64(std::string_view data);
uint64_t Fnv1a64(const uint8_t* data, size_t size);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view content);

}  // namespace stackfuzz

#endif  // STACKFUZZ_UTIL_HPP_
