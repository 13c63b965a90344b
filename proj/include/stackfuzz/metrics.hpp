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
// Seed scoring strategies. One subject metric (predicted-call-stack overlap)
// and four baselines reproducing the prioritization rules of well-known
// directed fuzzers over our interpreted targets.

#ifndef STACKFUZZ_METRICS_HPP_
#define STACKFUZZ_METRICS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stackfuzz/flowgraph.hpp"

namespace stackfuzz {

// CLI tags: staczzer, aflgo, windranger, dafl, afl (in enum order).
enum class Metric : uint8_t {
  kStackOverlap,   // |trace ∩ predicted sites|, maximize
  kCfgHarmonic,    // harmonic mean of traced CFG distances, minimize
  kDbbMean,        // mean CFG distance over traced deviation blocks, minimize
  kVfgReward,      // sum of (L - dist + 1) over traced value-flow nodes, max
  kUniform,        // constant; reduces choice to round-robin
};

enum class Polarity : uint8_t { kRewardLike, kDistanceLike };

Polarity MetricPolarity(Metric metric);
std::string MetricTag(Metric metric);
std::optional<Metric> ParseMetricTag(const std::string& tag);

// Scores are non-negative, +infinity acting as the no-information sentinel:
// it sorts worst for distance-like metrics; 0 sorts worst for reward-like.
using ScoreValue = double;

// `trace` arguments are sorted unique statement ids (ExecutionResult::trace).

// Harmonic mean of distances over traced nodes at finite, strictly positive
// distance (the target node itself and unreachable nodes are excluded).
// +infinity when no traced node qualifies.
ScoreValue ScoreCfgHarmonic(std::span<const LocationId> trace,
                            const DistanceMap& cfg_distance);

// Arithmetic mean of CFG distances over trace ∩ deviation blocks;
// +infinity when the intersection is empty. `deviation_blocks` sorted.
ScoreValue ScoreDbbMean(std::span<const LocationId> trace,
                        std::span<const LocationId> deviation_blocks,
                        const DistanceMap& cfg_distance);

// Sum of (max_finite_distance - dist + 1) over traced value-flow nodes at
// finite distance; 0 when the trace touches none.
ScoreValue ScoreVfgReward(std::span<const LocationId> trace,
                          const DistanceMap& vfg_distance,
                          int64_t max_finite_distance);

// |trace ∩ predicted|. `predicted_sites` sorted unique.
ScoreValue ScoreStackOverlap(std::span<const LocationId> trace,
                             std::span<const LocationId> predicted_sites);

}  // namespace stackfuzz

#endif  // STACKFUZZ_METRICS_HPP_
