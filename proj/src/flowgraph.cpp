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

#include "stackfuzz/flowgraph.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace stackfuzz {

namespace {

// First statement locations on entry to a block, looking through empty
// blocks. An all-empty cycle contributes nothing.
class FirstLocationFinder {
 public:
  explicit FirstLocationFinder(const Function& fn) : fn_(fn) {
    memo_.resize(fn.blocks.size());
    state_.resize(fn.blocks.size(), 0);
  }

  const std::vector<LocationId>& Of(uint32_t block) {
    if (state_[block] == 2) return memo_[block];
    if (state_[block] == 1) return empty_;  // cycle of empty blocks
    state_[block] = 1;
    const Block& b = fn_.blocks[block];
    std::set<LocationId> firsts;
    if (!b.stmts.empty()) {
      firsts.insert(b.stmts.front().loc);
    } else {
      switch (b.term.kind) {
        case Terminator::Kind::kGoto:
          for (LocationId l : Of(b.term.to)) firsts.insert(l);
          break;
        case Terminator::Kind::kBranch:
          for (LocationId l : Of(b.term.then_block)) firsts.insert(l);
          for (LocationId l : Of(b.term.else_block)) firsts.insert(l);
          break;
        case Terminator::Kind::kReturn:
          break;
      }
    }
    memo_[block].assign(firsts.begin(), firsts.end());
    state_[block] = 2;
    return memo_[block];
  }

 private:
  const Function& fn_;
  std::vector<std::vector<LocationId>> memo_;
  std::vector<uint8_t> state_;  // 0 = new, 1 = in progress, 2 = done
  const std::vector<LocationId> empty_;
};

FlowGraph MakeGraph(FlowGraph::Kind kind,
                    const std::set<std::pair<LocationId, LocationId>>& edges,
                    const std::set<LocationId>& nodes) {
  FlowGraph g;
  g.kind = kind;
  g.nodes.assign(nodes.begin(), nodes.end());
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

}  // namespace

FlowGraph BuildCfg(const TargetProgram& program) {
  std::set<std::pair<LocationId, LocationId>> edges;
  std::set<LocationId> nodes;

  std::vector<FirstLocationFinder> firsts;
  firsts.reserve(program.functions.size());
  for (const Function& fn : program.functions) firsts.emplace_back(fn);

  for (uint32_t fi = 0; fi < program.functions.size(); ++fi) {
    const Function& fn = program.functions[fi];
    for (const Block& block : fn.blocks) {
      for (size_t si = 0; si < block.stmts.size(); ++si) {
        const Statement& stmt = block.stmts[si];
        nodes.insert(stmt.loc);
        if (stmt.kind == StatementKind::kCall) {
          const Function& callee = program.functions[stmt.callee];
          for (LocationId entry :
               firsts[stmt.callee].Of(callee.entry_block)) {
            edges.emplace(stmt.loc, entry);
          }
        }
        if (si + 1 < block.stmts.size()) {
          edges.emplace(stmt.loc, block.stmts[si + 1].loc);
          continue;
        }
        switch (block.term.kind) {
          case Terminator::Kind::kGoto:
            for (LocationId l : firsts[fi].Of(block.term.to)) {
              edges.emplace(stmt.loc, l);
            }
            break;
          case Terminator::Kind::kBranch:
            for (LocationId l : firsts[fi].Of(block.term.then_block)) {
              edges.emplace(stmt.loc, l);
            }
            for (LocationId l : firsts[fi].Of(block.term.else_block)) {
              edges.emplace(stmt.loc, l);
            }
            break;
          case Terminator::Kind::kReturn:
            break;
        }
      }
    }
  }
  return MakeGraph(FlowGraph::Kind::kControlFlow, edges, nodes);
}

FlowGraph BuildVfg(
    const TargetProgram& program,
    const std::optional<std::vector<std::pair<LocationId, LocationId>>>&
        override_edges) {
  std::set<std::pair<LocationId, LocationId>> edges;
  std::set<LocationId> nodes;
  if (override_edges) {
    for (const auto& e : *override_edges) {
      edges.insert(e);
      nodes.insert(e.first);
      nodes.insert(e.second);
    }
    return MakeGraph(FlowGraph::Kind::kValueFlow, edges, nodes);
  }

  // Flow-insensitive: every def of a variable pairs with every use in the
  // same function, no kill sets. Parameter uses additionally receive an edge
  // from every call site of the function (the call passes the argument).
  std::vector<std::map<uint32_t, std::vector<LocationId>>> param_uses(
      program.functions.size());

  for (uint32_t fi = 0; fi < program.functions.size(); ++fi) {
    const Function& fn = program.functions[fi];
    std::map<uint32_t, std::vector<LocationId>> defs_of, uses_of;
    for (const Block& block : fn.blocks) {
      for (const Statement& s : block.stmts) {
        if (s.kind == StatementKind::kAssign) {
          defs_of[s.assign_slot].push_back(s.loc);
        }
        for (uint32_t slot : s.uses) uses_of[slot].push_back(s.loc);
      }
    }
    for (const auto& [slot, uses] : uses_of) {
      auto it = defs_of.find(slot);
      if (it != defs_of.end()) {
        for (LocationId d : it->second) {
          // d == u stays: a statement like n = n * 10 pairs with itself.
          // The self-loop never changes a BFS distance.
          for (LocationId u : uses) {
            edges.emplace(d, u);
            nodes.insert(d);
            nodes.insert(u);
          }
        }
      }
      if (slot < fn.params.size()) param_uses[fi][slot] = uses;
    }
  }

  for (const Function& fn : program.functions) {
    for (const Block& block : fn.blocks) {
      for (const Statement& s : block.stmts) {
        if (s.kind != StatementKind::kCall) continue;
        for (const auto& [slot, uses] : param_uses[s.callee]) {
          (void)slot;
          for (LocationId u : uses) {
            edges.emplace(s.loc, u);
            nodes.insert(s.loc);
            nodes.insert(u);
          }
        }
      }
    }
  }
  return MakeGraph(FlowGraph::Kind::kValueFlow, edges, nodes);
}

DistanceMap ComputeDistances(const FlowGraph& graph, LocationId target,
                             size_t location_count) {
  std::vector<int64_t> dist(location_count, DistanceMap::kUnreachable);
  std::map<LocationId, std::vector<LocationId>> rev;
  for (const auto& [from, to] : graph.edges) rev[to].push_back(from);
  if (target < location_count) {
    dist[target] = 0;
    std::queue<LocationId> frontier;
    frontier.push(target);
    while (!frontier.empty()) {
      LocationId cur = frontier.front();
      frontier.pop();
      auto it = rev.find(cur);
      if (it == rev.end()) continue;
      for (LocationId pred : it->second) {
        if (dist[pred] >= 0) continue;
        dist[pred] = dist[cur] + 1;
        frontier.push(pred);
      }
    }
  }
  return DistanceMap(target, std::move(dist));
}

std::vector<LocationId> DeviationBasicBlocks(const FlowGraph& cfg,
                                             const DistanceMap& dm) {
  std::map<LocationId, std::vector<LocationId>> succ;
  for (const auto& [from, to] : cfg.edges) succ[from].push_back(to);
  std::vector<LocationId> dbbs;
  for (LocationId node : cfg.nodes) {
    if (!dm.Reachable(node)) continue;
    auto it = succ.find(node);
    if (it == succ.end()) continue;
    for (LocationId s : it->second) {
      if (!dm.Reachable(s)) {
        dbbs.push_back(node);
        break;
      }
    }
  }
  return dbbs;
}

int64_t MaxFiniteDistance(const FlowGraph& graph, const DistanceMap& dm) {
  int64_t best = 0;
  for (LocationId node : graph.nodes) {
    if (dm.Reachable(node)) best = std::max(best, dm.At(node));
  }
  return best;
}

}  // namespace stackfuzz
