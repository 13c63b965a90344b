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

#include <doctest.h>

#include <algorithm>
#include <vector>

#include "stackfuzz/callgraph.hpp"
#include "stackfuzz/executor.hpp"
#include "stackfuzz/util.hpp"
#include "test_support.hpp"

namespace stackfuzz {
namespace {

TEST_SUITE("executor") {

TEST_CASE("toy digit-string input crashes at the target") {
  Benchmark bench = test::Toy();
  ExecutionResult r = Execute(bench.program, test::ToyInputS2());
  REQUIRE(r.crashed);
  CHECK(FormatLocation(bench.program.locations.Get(r.crash_location)) ==
        "cxxfilt.c:11");
  CHECK(test::Format(bench.program, r.crash_stack) ==
        std::vector<std::string>{"cxxfilt.c:11", "cxxfilt.c:20",
                                 "cxxfilt.c:33"});
}

TEST_CASE("toy Alice input walks the 9 true-branch nodes") {
  Benchmark bench = test::Toy();
  ExecutionResult r = Execute(bench.program, test::ToyInputS0());
  CHECK(!r.crashed);
  CHECK(r.trace == test::SortedIds(bench.program,
                                   {"cxxfilt.c:31", "cxxfilt.c:32",
                                    "cxxfilt.c:33", "cxxfilt.c:16",
                                    "cxxfilt.c:17", "cxxfilt.c:18",
                                    "cxxfilt.c:19", "cxxfilt.c:20",
                                    "cxxfilt.c:4"}));
}

TEST_CASE("toy _GLOBAL_ input walks the 8 false-branch nodes") {
  Benchmark bench = test::Toy();
  ExecutionResult r = Execute(bench.program, test::ToyInputS1());
  CHECK(!r.crashed);
  CHECK(r.trace == test::SortedIds(bench.program,
                                   {"cxxfilt.c:31", "cxxfilt.c:32",
                                    "cxxfilt.c:33", "cxxfilt.c:16",
                                    "cxxfilt.c:23", "cxxfilt.c:24",
                                    "cxxfilt.c:25", "cxxfilt.c:4"}));
}

TEST_CASE("execution is deterministic field by field") {
  Benchmark bench = test::Toy();
  for (const auto& input :
       {test::ToyInputS0(), test::ToyInputS1(), test::ToyInputS2()}) {
    ExecutionResult a = Execute(bench.program, input);
    ExecutionResult b = Execute(bench.program, input);
    CHECK(a.trace == b.trace);
    CHECK(a.crashed == b.crashed);
    CHECK(a.crash_location == b.crash_location);
    CHECK(a.crash_stack == b.crash_stack);
    CHECK(a.step_count == b.step_count);
  }
}

TEST_CASE("crash result invariants") {
  Benchmark bench = test::Toy();
  ExecutionResult r = Execute(bench.program, test::ToyInputS2());
  REQUIRE(r.crashed);
  REQUIRE(!r.crash_stack.empty());
  CHECK(r.crash_stack.front() == r.crash_location);
  CHECK(r.TraceContains(r.crash_location));
  // Every outer frame is a call site present in the trace.
  for (size_t i = 1; i < r.crash_stack.size(); ++i) {
    CHECK(r.TraceContains(r.crash_stack[i]));
    CHECK(bench.program.StatementOf(r.crash_stack[i]).kind ==
          StatementKind::kCall);
  }
}

TEST_CASE("crash stack frames follow call graph edges") {
  Benchmark bench = test::Toy();
  CallGraph cg = BuildCallGraph(bench.program);
  ExecutionResult r = Execute(bench.program, test::ToyInputS2());
  REQUIRE(r.crashed);
  for (size_t i = 1; i < r.crash_stack.size(); ++i) {
    auto it = cg.site_edge.find(r.crash_stack[i]);
    REQUIRE(it != cg.site_edge.end());
    const CallEdge& edge = cg.edges[it->second];
    // The inner frame lies in this edge's callee.
    CHECK(bench.program.stmt_at[r.crash_stack[i - 1]].function ==
          edge.callee);
  }
  // The outermost frame lies in the entry function.
  CHECK(bench.program.stmt_at[r.crash_stack.back()].function ==
        bench.program.entry);
}

TEST_CASE("trace is exactly the executed statement set") {
  // Straight-line program cross-checked by hand.
  TargetProgram p = test::ProgramFromJson(R"({
    "entry": "f",
    "functions": {
      "f": {"file": "s.c", "params": [],
            "blocks": [{"id": "b0",
                        "stmts": [{"line": 1, "assign": "x", "expr": "in[0]"},
                                  {"line": 2, "assign": "y", "expr": "x + 1"},
                                  {"line": 3, "nop": true}],
                        "term": "return"}]}
    }
  })");
  ExecutionResult r = Execute(p, std::vector<uint8_t>{9});
  CHECK(r.trace == test::SortedIds(p, {"s.c:1", "s.c:2", "s.c:3"}));
  CHECK(!r.crashed);

  // Branches leave the untaken side out of the trace.
  TargetProgram q = test::ProgramFromJson(R"({
    "entry": "f",
    "functions": {
      "f": {"file": "s.c", "params": [],
            "blocks": [{"id": "b0", "stmts": [{"line": 1, "nop": true}],
                        "term": {"branch": {"cond": "in[0] == 1",
                                            "then": "b1", "else": "b2"}}},
                       {"id": "b1", "stmts": [{"line": 2, "nop": true}],
                        "term": "return"},
                       {"id": "b2", "stmts": [{"line": 3, "nop": true}],
                        "term": "return"}]}
    }
  })");
  CHECK(Execute(q, std::vector<uint8_t>{1}).trace ==
        test::SortedIds(q, {"s.c:1", "s.c:2"}));
  CHECK(Execute(q, std::vector<uint8_t>{0}).trace ==
        test::SortedIds(q, {"s.c:1", "s.c:3"}));
}

TEST_CASE("step limit marks hangs") {
  TargetProgram p = test::ProgramFromJson(R"({
    "entry": "f",
    "functions": {
      "f": {"file": "h.c", "params": [],
            "blocks": [{"id": "spin", "stmts": [{"line": 1, "nop": true}],
                        "term": {"goto": "spin"}}]}
    }
  })");
  ExecutionResult r = Execute(p, {}, 1000);
  CHECK(!r.crashed);
  CHECK(r.step_count == 1000);

  // A statement-free spin still burns steps on terminator traversal.
  TargetProgram q = test::ProgramFromJson(R"({
    "entry": "f",
    "functions": {
      "f": {"file": "h.c", "params": [],
            "blocks": [{"id": "a", "stmts": [], "term": {"goto": "b"}},
                       {"id": "b", "stmts": [], "term": {"goto": "a"}}]}
    }
  })");
  ExecutionResult s = Execute(q, {}, 500);
  CHECK(!s.crashed);
  CHECK(s.step_count == 500);
}

TEST_CASE("single-function crash yields a one-frame stack") {
  TargetProgram p = test::ProgramFromJson(R"({
    "entry": "f",
    "functions": {
      "f": {"file": "c.c", "params": [],
            "blocks": [{"id": "b", "stmts": [{"line": 7, "crash_if": "1"}],
                        "term": "return"}]}
    }
  })");
  ExecutionResult r = Execute(p, {});
  REQUIRE(r.crashed);
  CHECK(test::Format(p, r.crash_stack) == std::vector<std::string>{"c.c:7"});
}

TEST_CASE("witness stack helper") {
  Benchmark bench = test::Toy();
  std::vector<LocationId> stack =
      WitnessStack(bench.program, *bench.witness);
  CHECK(test::Format(bench.program, stack) ==
        std::vector<std::string>{"cxxfilt.c:11", "cxxfilt.c:20",
                                 "cxxfilt.c:33"});
  // A non-crashing input is a misconfigured witness.
  CHECK_THROWS_AS(WitnessStack(bench.program, test::ToyInputS0()),
                  std::runtime_error);
}

TEST_CASE("bytes beyond the ones read never change the trace") {
  TargetProgram p = test::ProgramFromJson(R"({
    "entry": "f",
    "functions": {
      "f": {"file": "l.c", "params": [],
            "blocks": [{"id": "b0", "stmts": [{"line": 1, "nop": true}],
                        "term": {"branch": {"cond": "in[0] < 128",
                                            "then": "b1", "else": "b2"}}},
                       {"id": "b1", "stmts": [{"line": 2, "nop": true}],
                        "term": "return"},
                       {"id": "b2", "stmts": [{"line": 3, "nop": true}],
                        "term": "return"}]}
    }
  })");
  std::vector<uint8_t> base{5, 0, 0};
  ExecutionResult expected = Execute(p, base);
  for (int tail = 0; tail < 256; tail += 17) {
    std::vector<uint8_t> variant{5, static_cast<uint8_t>(tail),
                                 static_cast<uint8_t>(255 - tail)};
    ExecutionResult r = Execute(p, variant);
    CHECK(r.trace == expected.trace);
    CHECK(r.step_count == expected.step_count);
  }
}

TEST_CASE("locals start at zero and parameters pass by value") {
  TargetProgram p = test::ProgramFromJson(R"({
    "entry": "main",
    "functions": {
      "main": {"file": "v.c", "params": [],
        "blocks": [{"id": "b",
                    "stmts": [{"line": 1, "assign": "x", "expr": "41"},
                              {"line": 2, "call": "g", "args": ["x + 1"]},
                              {"line": 3, "crash_if": "x != 41"}],
                    "term": "return"}]},
      "g": {"file": "v.c", "params": ["v"],
        "blocks": [{"id": "b",
                    "stmts": [{"line": 10, "assign": "v", "expr": "v * 2"},
                              {"line": 11, "crash_if": "v != 84"},
                              {"line": 12, "crash_if": "unset != 0"}],
                    "term": "return"}]}
    }
  })");
  ExecutionResult r = Execute(p, {});
  // None of the crash_if guards fire: v arrived as 42, doubled locally,
  // the caller's x kept 41 and 'unset' read 0.
  CHECK(!r.crashed);
  CHECK(r.trace.size() == 6);
}

TEST_CASE("execution continues after a returning call") {
  TargetProgram p = test::ProgramFromJson(R"({
    "entry": "main",
    "functions": {
      "main": {"file": "r.c", "params": [],
        "blocks": [{"id": "b",
                    "stmts": [{"line": 1, "call": "leaf", "args": []},
                              {"line": 2, "crash_if": "1"}],
                    "term": "return"}]},
      "leaf": {"file": "r.c", "params": [],
        "blocks": [{"id": "b", "stmts": [{"line": 10, "nop": true}],
                    "term": "return"}]}
    }
  })");
  ExecutionResult r = Execute(p, {});
  REQUIRE(r.crashed);
  // The crash is after the call returned: the stack has one frame only.
  CHECK(test::Format(p, r.crash_stack) == std::vector<std::string>{"r.c:2"});
  CHECK(r.TraceContains(test::L(p, "r.c:10")));
}

}  // TEST_SUITE

}  // namespace
}  // namespace stackfuzz
