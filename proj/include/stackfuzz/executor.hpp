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

#ifndef STACKFUZZ_EXECUTOR_HPP_
#define STACKFUZZ_EXECUTOR_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "stackfuzz/program.hpp"

namespace stackfuzz {

// A run stops after this many steps and counts as a hang. Statements and
// terminator traversals both cost one step, so control-flow-only cycles
// cannot spin forever.
inline constexpr uint64_t kDefaultStepLimit = 1'000'000;

struct ExecutionResult {
  // The set of executed statement locations, sorted ascending by id.
  // A set, not a sequence: loop iteration counts do not distinguish traces.
  std::vector<LocationId> trace;
  bool crashed = false;
  LocationId crash_location = 0;
  // Innermost first: the crash site, then each pending call site outward.
  std::vector<LocationId> crash_stack;
  uint64_t step_count = 0;

  bool TraceContains(LocationId loc) const;
};

// Deterministic, re-entrant, side-effect free. Identical (program, input)
// pairs yield identical results. step_count == step_limit signals a hang.
ExecutionResult Execute(const TargetProgram& program,
                        std::span<const uint8_t> input,
                        uint64_t step_limit = kDefaultStepLimit);

// Runs the witness input and returns its crash stack (innermost first).
// Throws std::runtime_error if the witness does not crash: a benchmark
// shipping a non-crashing witness is misconfigured.
std::vector<LocationId> WitnessStack(const TargetProgram& program,
                                     std::span<const uint8_t> witness,
                                     uint64_t step_limit = kDefaultStepLimit);

}  // namespace stackfuzz

#endif  // STACKFUZZ_EXECUTOR_HPP_
