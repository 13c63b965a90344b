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

#ifndef STACKFUZZ_GENERATOR_HPP_
#define STACKFUZZ_GENERATOR_HPP_

#include <cstdint>
#include <string>

#include <json.hpp>

namespace stackfuzz {

struct GeneratorConfig {
  uint64_t seed = 1;
  int min_depth = 3;    // call-chain length between entry and target
  int max_depth = 4;
  int decoy_branches = 8;
};

// One synthetic benchmark document shaped like the built-in toy: the entry
// splits on the boolean channel into a guarded call chain ending in a
// crashing length check, and a decoy routine whose independent branches spray
// the corpus with distinct traces. Ships a crashing witness and two seeds
// (one on-chain, one decoy). Deterministic in (config.seed, index).
nlohmann::json GenerateBenchmarkDocument(const GeneratorConfig& config,
                                         uint32_t index);

// Writes <count> documents plus a suite.json referencing them into `dir`.
// Returns the suite file path.
std::string GenerateSuite(const std::string& dir, uint32_t count,
                          const GeneratorConfig& config);

}  // namespace stackfuzz

#endif  // STACKFUZZ_GENERATOR_HPP_
