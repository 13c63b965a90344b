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

#include "stackfuzz/callgraph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

#include "stackfuzz/location.hpp"

namespace stackfuzz {

CallGraph BuildCallGraph(const TargetProgram& program) {
  CallGraph cg;
  cg.function_count = static_cast<uint32_t>(program.functions.size());
  for (uint32_t fi = 0; fi < program.functions.size(); ++fi) {
    for (const Block& block : program.functions[fi].blocks) {
      for (const Statement& stmt : block.stmts) {
        if (stmt.kind != StatementKind::kCall) continue;
        cg.edges.push_back(CallEdge{fi, stmt.callee, stmt.loc});
      }
    }
  }
  std::sort(cg.edges.begin(), cg.edges.end(),
            [](const CallEdge& a, const CallEdge& b) {
              return std::tie(a.caller, a.callee, a.site) <
                     std::tie(b.caller, b.callee, b.site);
            });
  for (uint32_t i = 0; i < cg.edges.size(); ++i) {
    cg.site_edge.emplace(cg.edges[i].site, i);
  }
  return cg;
}

std::vector<uint32_t> ReachableFunctions(const CallGraph& cg,
                                         uint32_t f_target) {
  if (f_target >= cg.function_count) {
    throw std::invalid_argument("unknown target function index " +
                                std::to_string(f_target));
  }
  std::map<uint32_t, std::vector<uint32_t>> callers_of;
  for (const CallEdge& e : cg.edges) {
    callers_of[e.callee].push_back(e.caller);
  }
  std::set<uint32_t> seen{f_target};
  std::queue<uint32_t> pending;
  pending.push(f_target);
  while (!pending.empty()) {
    uint32_t f = pending.front();
    pending.pop();
    auto it = callers_of.find(f);
    if (it == callers_of.end()) continue;
    for (uint32_t caller : it->second) {
      if (seen.insert(caller).second) pending.push(caller);
    }
  }
  return {seen.begin(), seen.end()};
}

CodeSlice RenderSlice(const TargetProgram& program, const CallGraph& cg,
                      std::span<const uint32_t> reachable, LocationId target) {
  std::set<uint32_t> in_slice(reachable.begin(), reachable.end());
  if (!in_slice.count(program.stmt_at[target].function)) {
    throw std::invalid_argument("slice target is not in a reachable function");
  }

  std::set<LocationId> annotated{target};
  for (const CallEdge& e : cg.edges) {
    if (in_slice.count(e.caller) && in_slice.count(e.callee)) {
      annotated.insert(e.site);
    }
  }

  // Callee-first order: a function is ready once all its in-slice callees
  // are emitted; ties and call cycles fall back to name order.
  std::map<uint32_t, std::set<uint32_t>> callees_of;
  std::map<uint32_t, std::set<uint32_t>> callers_of;
  for (const CallEdge& e : cg.edges) {
    if (e.caller == e.callee) continue;
    if (!in_slice.count(e.caller) || !in_slice.count(e.callee)) continue;
    callees_of[e.caller].insert(e.callee);
    callers_of[e.callee].insert(e.caller);
  }
  auto by_name = [&](uint32_t a, uint32_t b) {
    return std::tie(program.functions[a].name, a) <
           std::tie(program.functions[b].name, b);
  };
  std::set<uint32_t, decltype(by_name)> ready(by_name);
  std::set<uint32_t, decltype(by_name)> blocked(by_name);
  for (uint32_t f : in_slice) {
    auto it = callees_of.find(f);
    if (it == callees_of.end() || it->second.empty()) {
      ready.insert(f);
    } else {
      blocked.insert(f);
    }
  }
  std::vector<uint32_t> order;
  while (!ready.empty() || !blocked.empty()) {
    if (ready.empty()) {  // cycle: force the name-smallest blocked function
      ready.insert(*blocked.begin());
      blocked.erase(blocked.begin());
    }
    uint32_t f = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(f);
    auto it = callers_of.find(f);
    if (it == callers_of.end()) continue;
    for (uint32_t caller : it->second) {
      auto cit = callees_of.find(caller);
      if (cit == callees_of.end()) continue;
      cit->second.erase(f);
      if (cit->second.empty() && blocked.erase(caller)) ready.insert(caller);
    }
  }

  std::map<LocationId, std::string> notes;
  for (LocationId site : annotated) {
    notes.emplace(site, " // " + FormatLocation(program.locations.Get(site)));
  }

  CodeSlice slice;
  for (size_t oi = 0; oi < order.size(); ++oi) {
    const Function& fn = program.functions[order[oi]];
    if (oi) slice.text += "\n";
    slice.text += "===== " + fn.file + ":" + fn.name + " =====\n";
    std::map<int, LocationId> notes_by_line;
    for (LocationId site : annotated) {
      if (program.stmt_at[site].function == order[oi]) {
        notes_by_line.emplace(program.locations.Get(site).line, site);
      }
    }
    for (size_t i = 0; i < fn.source.lines.size(); ++i) {
      slice.text += fn.source.lines[i];
      auto it = notes_by_line.find(fn.source.start + static_cast<int>(i));
      if (it != notes_by_line.end()) slice.text += notes.at(it->second);
      slice.text += "\n";
    }
  }
  slice.annotated_sites.assign(annotated.begin(), annotated.end());
  return slice;
}

}  // namespace stackfuzz
