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
// Seed corpus, chosen-round bookkeeping and energy assignment.

#ifndef STACKFUZZ_SCHEDULER_HPP_
#define STACKFUZZ_SCHEDULER_HPP_

#include <cstdint>
#include <map>
#include <vector>

#include "stackfuzz/executor.hpp"
#include "stackfuzz/metrics.hpp"

namespace stackfuzz {

struct Seed {
  uint32_t id = 0;                    // == insertion index
  std::vector<uint8_t> input;
  ExecutionResult result;
  std::map<Metric, ScoreValue> scores;
  uint64_t discovery_execution = 0;   // executions done when retained
};

inline constexpr uint64_t kBaseEnergyUnit = 64;

class Scheduler {
 public:
  explicit Scheduler(Metric metric) : metric_(metric) {}

  Metric metric() const { return metric_; }
  const std::vector<Seed>& seeds() const { return seeds_; }
  const Seed& seed(uint32_t id) const { return seeds_[id]; }
  bool empty() const { return seeds_.empty(); }

  uint32_t AddSeed(std::vector<uint8_t> input, ExecutionResult result,
                   ScoreValue score, uint64_t discovery_execution);

  // Round-robin over best-first rounds: each round visits every seed once,
  // always taking the best-scoring not-yet-chosen seed (polarity decides the
  // direction; ties go to the smallest id). When everyone has been chosen
  // the round resets. Seeds added mid-round join it immediately.
  uint32_t ChooseSeed();

  // Throughput-normalized batch size: kBaseEnergyUnit scaled by how fast the
  // seed runs and how much it covers, both ratios clamped to [1/4, 4],
  // rounded up.
  uint64_t BaseEnergy(const Seed& seed) const;

  // Overlap-proportional energy: ceil(score / mean_score * BaseEnergy),
  // computed in exact rational arithmetic; falls back to BaseEnergy when the
  // corpus mean is zero. Always >= 1.
  uint64_t AssignEnergy(const Seed& seed) const;

  // AssignEnergy for the overlap metric, BaseEnergy for the baselines (their
  // scores are not overlap counts, which is what the scaling law is defined
  // over).
  uint64_t EnergyFor(const Seed& seed) const;

 private:
  Metric metric_;
  std::vector<Seed> seeds_;
  std::vector<uint8_t> chosen_;
  size_t chosen_count_ = 0;
  double total_steps_ = 0;
  double total_trace_ = 0;
  double score_sum_ = 0;
};

}  // namespace stackfuzz

#endif  // STACKFUZZ_SCHEDULER_HPP_
