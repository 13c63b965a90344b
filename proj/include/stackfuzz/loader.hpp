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
// Benchmark documents are JSON with this shape (see benchmarks/ for worked
// files):
//
//   {
//     "entry": "main",
//     "functions": {
//       "main": {
//         "file": "prog.c",
//         "params": [],
//         "blocks": [
//           {"id": "b0",
//            "stmts": [{"line": 31, "assign": "pos", "expr": "1"},
//                      {"line": 33, "call": "f", "args": ["pos"]},
//                      {"line": 40, "crash_if": "in[0] == 33"},
//                      {"line": 41, "nop": true}],
//            "term": "return"}],
//         "entry_block": "b0",          // optional, default first block
//         "source": {"start": 30, "lines": ["int main(){", "..."]}  // optional
//       }
//     },
//     "targets": ["prog.c:40"],
//     "witness": "0139",                 // optional hex input
//     "vfg_edges": [["prog.c:31", "prog.c:33"]],  // optional override
//     "seeds": ["00", "01414243"]
//   }
//
// Block terminators: "return", {"goto": "b1"}, or
// {"branch": {"cond": "in[0] != 0", "then": "b1", "else": "b2"}}.
// When a function omits "source", listing text is synthesized from its
// statements so slices still render.

#ifndef STACKFUZZ_LOADER_HPP_
#define STACKFUZZ_LOADER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stackfuzz/program.hpp"

namespace stackfuzz {

struct Benchmark {
  std::string name;
  TargetProgram program;
  std::vector<LocationId> targets;
  std::optional<std::vector<uint8_t>> witness;
  std::optional<std::vector<std::pair<LocationId, LocationId>>> vfg_edges;
  std::vector<std::vector<uint8_t>> seeds;
};

// Throws DocumentError naming the offending path on any malformed input:
// dangling entry, unknown callee or block, duplicate Locations, bad hex,
// unparseable expression, target outside the program.
Benchmark LoadBenchmark(const nlohmann::json& doc, const std::string& name);
Benchmark LoadBenchmarkFile(const std::string& path);
TargetProgram LoadProgram(const nlohmann::json& doc);

// Resolves "builtin:<name>" or a bare built-in name before falling back to
// the filesystem.
Benchmark ResolveBenchmark(const std::string& name_or_path);

}  // namespace stackfuzz

#endif  // STACKFUZZ_LOADER_HPP_
