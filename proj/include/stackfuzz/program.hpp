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
// In-memory form of an interpreted target program: functions made of basic
// blocks, each a statement list plus one terminator. Programs are immutable
// after loading; the executor never mutates them, so campaigns may share one
// instance across threads.

#ifndef STACKFUZZ_PROGRAM_HPP_
#define STACKFUZZ_PROGRAM_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stackfuzz/expr.hpp"
#include "stackfuzz/location.hpp"

namespace stackfuzz {

enum class StatementKind : uint8_t { kAssign, kCall, kCrashIf, kNop };

struct Statement {
  LocationId loc = 0;
  StatementKind kind = StatementKind::kNop;
  uint32_t assign_slot = 0;       // kAssign target
  Expr expr;                      // kAssign rhs / kCrashIf predicate
  uint32_t callee = 0;            // kCall function index
  std::vector<Expr> args;         // kCall arguments
  std::vector<uint32_t> uses;     // variable slots read (sorted)
};

struct Terminator {
  enum class Kind : uint8_t { kGoto, kBranch, kReturn } kind =
      Kind::kReturn;
  uint32_t to = 0;                // kGoto target block
  uint32_t then_block = 0;        // kBranch targets
  uint32_t else_block = 0;
  Expr cond;                      // kBranch predicate
};

struct Block {
  std::string id;
  std::vector<Statement> stmts;
  Terminator term;
};

// Listing text backing a function: `lines[i]` sits at line `start + i` of
// `Function::file`. Drives slice rendering; execution never reads it.
struct SourceText {
  int start = 0;
  std::vector<std::string> lines;
};

struct Function {
  std::string name;
  std::string file;
  std::vector<std::string> params;
  VarTable vars;                  // params first, then locals
  std::vector<Block> blocks;
  uint32_t entry_block = 0;
  SourceText source;
};

// Where a statement location lives. Valid for every interned LocationId.
struct StatementRef {
  uint32_t function = 0;
  uint32_t block = 0;
  uint32_t stmt = 0;
};

struct TargetProgram {
  std::vector<Function> functions;
  std::map<std::string, uint32_t> function_index;
  uint32_t entry = 0;

  LocationTable locations;            // statement locations only
  std::vector<StatementRef> stmt_at;  // indexed by LocationId

  const Function& FunctionOf(LocationId loc) const {
    return functions[stmt_at[loc].function];
  }
  const Statement& StatementOf(LocationId loc) const {
    const StatementRef& r = stmt_at[loc];
    return functions[r.function].blocks[r.block].stmts[r.stmt];
  }
  std::optional<LocationId> FindLocation(const Location& loc) const {
    return locations.Find(loc);
  }

  // Structural checks beyond what construction enforces: entry exists, block
  // references resolve, statement locations are unique program-wide and each
  // lies inside exactly one function's source text. Throws DocumentError.
  void Validate() const;
};

}  // namespace stackfuzz

#endif  // STACKFUZZ_PROGRAM_HPP_
