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

#ifndef STACKFUZZ_CALLGRAPH_HPP_
#define STACKFUZZ_CALLGRAPH_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stackfuzz/program.hpp"

namespace stackfuzz {

// One edge per call statement. Two calls between the same pair of functions
// stay distinct edges because their sites differ; sites are unique
// program-wide, so a site names at most one edge.
struct CallEdge {
  uint32_t caller = 0;
  uint32_t callee = 0;
  LocationId site = 0;
};

struct CallGraph {
  uint32_t function_count = 0;              // vertex set is [0, function_count)
  std::vector<CallEdge> edges;              // sorted (caller, callee, site)
  std::map<LocationId, uint32_t> site_edge; // site -> index into edges
};

CallGraph BuildCallGraph(const TargetProgram& program);

// Functions that can reach `f_target` by zero or more calls (reflexive:
// always contains f_target). Sorted function indices.
std::vector<uint32_t> ReachableFunctions(const CallGraph& cg,
                                         uint32_t f_target);

struct CodeSlice {
  std::string text;
  std::vector<LocationId> annotated_sites;  // sorted
};

// Concatenated listings of `reachable`, callees before callers (topological
// where the call graph permits, name order breaking ties and cycles). Each
// function is introduced by one "===== file:function =====" header; the
// target line and every call site whose edge stays inside `reachable` get a
// trailing "// file:line" annotation. Throws std::invalid_argument if the
// target lies outside every reachable function.
CodeSlice RenderSlice(const TargetProgram& program, const CallGraph& cg,
                      std::span<const uint32_t> reachable, LocationId target);

}  // namespace stackfuzz

#endif  // STACKFUZZ_CALLGRAPH_HPP_
