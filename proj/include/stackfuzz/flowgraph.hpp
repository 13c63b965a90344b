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
// Statement-level flow graphs the baseline distance metrics run on. Both
// kinds share one node space (statement LocationIds) and unit edge weights.

#ifndef STACKFUZZ_FLOWGRAPH_HPP_
#define STACKFUZZ_FLOWGRAPH_HPP_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "stackfuzz/program.hpp"

namespace stackfuzz {

struct FlowGraph {
  enum class Kind : uint8_t { kControlFlow, kValueFlow } kind =
      Kind::kControlFlow;
  std::vector<LocationId> nodes;                          // sorted
  std::vector<std::pair<LocationId, LocationId>> edges;   // sorted, unique
};

// Interprocedural control flow over statements: consecutive statements
// within a block, last statement to each successor block's first statement,
// and call site to callee entry statement. Empty blocks pass through: an
// edge into one lands on the first statements beyond it. Call statements
// gain no fall-through edge from being calls; they keep whatever
// sequential/terminator edges their block position gives them.
FlowGraph BuildCfg(const TargetProgram& program);

// Value flow: an edge per def-use pair (statement defining v, statement
// using v). `override_edges`, when a benchmark ships them, are used verbatim
// instead; node set = edge endpoints in either case.
FlowGraph BuildVfg(
    const TargetProgram& program,
    const std::optional<std::vector<std::pair<LocationId, LocationId>>>&
        override_edges);

class DistanceMap {
 public:
  static constexpr int64_t kUnreachable = -1;

  DistanceMap(LocationId target, std::vector<int64_t> dist)
      : target_(target), dist_(std::move(dist)) {}

  LocationId target() const { return target_; }
  bool Reachable(LocationId loc) const {
    return loc < dist_.size() && dist_[loc] >= 0;
  }
  // Finite distance; only meaningful when Reachable(loc).
  int64_t At(LocationId loc) const { return dist_[loc]; }

 private:
  LocationId target_;
  std::vector<int64_t> dist_;
};

// Forward shortest distance from every node to `target` (reverse BFS from
// the target, unit weights). Nodes that cannot reach it, and locations
// outside the graph, are unreachable. dist(target) == 0.
DistanceMap ComputeDistances(const FlowGraph& graph, LocationId target,
                             size_t location_count);

// Nodes at finite distance with at least one unreachable successor: the
// last points where execution can still steer away from the target.
std::vector<LocationId> DeviationBasicBlocks(const FlowGraph& cfg,
                                             const DistanceMap& dm);

// Largest finite node distance in the graph (0 if nothing is reachable).
int64_t MaxFiniteDistance(const FlowGraph& graph, const DistanceMap& dm);

}  // namespace stackfuzz

#endif  // STACKFUZZ_FLOWGRAPH_HPP_
