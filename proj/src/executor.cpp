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

#include "stackfuzz/executor.hpp"

#include <algorithm>
#include <stdexcept>

namespace stackfuzz {

namespace {

struct Frame {
  uint32_t function;
  uint32_t block;
  uint32_t stmt;
  std::vector<int64_t> locals;
};

}  // namespace

bool ExecutionResult::TraceContains(LocationId loc) const {
  return std::binary_search(trace.begin(), trace.end(), loc);
}

ExecutionResult Execute(const TargetProgram& program,
                        std::span<const uint8_t> input, uint64_t step_limit) {
  ExecutionResult result;
  std::vector<uint8_t> hit(program.locations.size(), 0);

  std::vector<Frame> stack;
  {
    const Function& entry = program.functions[program.entry];
    stack.push_back(Frame{program.entry, entry.entry_block, 0,
                          std::vector<int64_t>(entry.vars.size(), 0)});
  }

  uint64_t steps = 0;
  while (!stack.empty() && steps < step_limit) {
    Frame& frame = stack.back();
    const Function& fn = program.functions[frame.function];
    const Block& block = fn.blocks[frame.block];

    if (frame.stmt < block.stmts.size()) {
      const Statement& stmt = block.stmts[frame.stmt];
      ++steps;
      hit[stmt.loc] = 1;
      switch (stmt.kind) {
        case StatementKind::kAssign:
          frame.locals[stmt.assign_slot] =
              EvalExpr(stmt.expr, input, frame.locals);
          ++frame.stmt;
          break;
        case StatementKind::kCall: {
          const Function& callee = program.functions[stmt.callee];
          std::vector<int64_t> locals(callee.vars.size(), 0);
          for (size_t i = 0; i < stmt.args.size(); ++i) {
            locals[i] = EvalExpr(stmt.args[i], input, frame.locals);
          }
          // Caller's stmt index stays on the call; it names the pending
          // call site if a crash unwinds through this frame, and advances
          // when the callee returns.
          stack.push_back(Frame{stmt.callee, callee.entry_block, 0,
                                std::move(locals)});
          break;
        }
        case StatementKind::kCrashIf:
          if (EvalExpr(stmt.expr, input, frame.locals) != 0) {
            result.crashed = true;
            result.crash_location = stmt.loc;
            result.crash_stack.push_back(stmt.loc);
            for (size_t i = stack.size() - 1; i-- > 0;) {
              const Frame& caller = stack[i];
              const Statement& site = program.functions[caller.function]
                                          .blocks[caller.block]
                                          .stmts[caller.stmt];
              result.crash_stack.push_back(site.loc);
            }
            stack.clear();
            break;
          }
          ++frame.stmt;
          break;
        case StatementKind::kNop:
          ++frame.stmt;
          break;
      }
      continue;
    }

    // Terminators cost a step too, so control-flow-only cycles still reach
    // the hang limit.
    ++steps;
    switch (block.term.kind) {
      case Terminator::Kind::kGoto:
        frame.block = block.term.to;
        frame.stmt = 0;
        break;
      case Terminator::Kind::kBranch:
        frame.block = EvalExpr(block.term.cond, input, frame.locals) != 0
                          ? block.term.then_block
                          : block.term.else_block;
        frame.stmt = 0;
        break;
      case Terminator::Kind::kReturn:
        stack.pop_back();
        if (!stack.empty()) ++stack.back().stmt;  // move past the call
        break;
    }
  }

  result.step_count = steps;
  for (LocationId id = 0; id < hit.size(); ++id) {
    if (hit[id]) result.trace.push_back(id);
  }
  return result;
}

std::vector<LocationId> WitnessStack(const TargetProgram& program,
                                     std::span<const uint8_t> witness,
                                     uint64_t step_limit) {
  ExecutionResult result = Execute(program, witness, step_limit);
  if (!result.crashed) {
    throw std::runtime_error(
        "witness input does not crash; the benchmark is misconfigured");
  }
  return result.crash_stack;
}

}  // namespace stackfuzz
