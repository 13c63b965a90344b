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

#include "stackfuzz/program.hpp"

#include <set>

#include "stackfuzz/util.hpp"

namespace stackfuzz {

void TargetProgram::Validate() const {
  if (functions.empty()) throw DocumentError("program has no functions");
  if (entry >= functions.size()) throw DocumentError("entry: out of range");

  std::set<LocationId> seen;
  for (const Function& fn : functions) {
    const std::string ctx = "functions/" + fn.name;
    if (fn.blocks.empty()) throw DocumentError(ctx + ": no blocks");
    if (fn.entry_block >= fn.blocks.size()) {
      throw DocumentError(ctx + ": entry_block out of range");
    }
    for (const Block& block : fn.blocks) {
      const std::string bctx = ctx + "/blocks/" + block.id;
      switch (block.term.kind) {
        case Terminator::Kind::kGoto:
          if (block.term.to >= fn.blocks.size()) {
            throw DocumentError(bctx + "/term: goto target out of range");
          }
          break;
        case Terminator::Kind::kBranch:
          if (block.term.then_block >= fn.blocks.size() ||
              block.term.else_block >= fn.blocks.size()) {
            throw DocumentError(bctx + "/term: branch target out of range");
          }
          if (block.term.cond.empty()) {
            throw DocumentError(bctx + "/term: branch without condition");
          }
          break;
        case Terminator::Kind::kReturn:
          break;
      }
      for (const Statement& stmt : block.stmts) {
        if (stmt.kind == StatementKind::kCall &&
            stmt.callee >= functions.size()) {
          throw DocumentError(bctx + ": call to unknown function");
        }
        if (!seen.insert(stmt.loc).second) {
          throw DocumentError(bctx + ": duplicate statement location " +
                              FormatLocation(locations.Get(stmt.loc)));
        }
      }
    }
  }

  // Each statement must sit inside its own function's listing and inside no
  // other function's: annotated slices rely on line -> function being
  // unambiguous.
  for (const Function& fn : functions) {
    for (const Block& block : fn.blocks) {
      for (const Statement& stmt : block.stmts) {
        const Location& loc = locations.Get(stmt.loc);
        int owners = 0;
        bool in_own = false;
        for (const Function& other : functions) {
          if (other.file != loc.file) continue;
          int end = other.source.start +
                    static_cast<int>(other.source.lines.size());
          if (loc.line >= other.source.start && loc.line < end) {
            ++owners;
            if (&other == &fn) in_own = true;
          }
        }
        if (owners != 1 || !in_own) {
          throw DocumentError("functions/" + fn.name + ": statement at " +
                              FormatLocation(loc) +
                              (owners == 0
                                   ? " lies outside its function's source"
                                   : " lies in multiple functions' source"));
        }
      }
    }
  }
}

}  // namespace stackfuzz
