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

#include "stackfuzz/metrics.hpp"

#include <algorithm>
#include <limits>

namespace stackfuzz {

namespace {
constexpr ScoreValue kInf = std::numeric_limits<ScoreValue>::infinity();
}  // namespace

Polarity MetricPolarity(Metric metric) {
  switch (metric) {
    case Metric::kStackOverlap:
    case Metric::kVfgReward:
    case Metric::kUniform:
      return Polarity::kRewardLike;
    case Metric::kCfgHarmonic:
    case Metric::kDbbMean:
      return Polarity::kDistanceLike;
  }
  return Polarity::kRewardLike;
}

std::string MetricTag(Metric metric) {
  switch (metric) {
    case Metric::kStackOverlap: return "staczzer";
    case Metric::kCfgHarmonic: return "aflgo";
    case Metric::kDbbMean: return "windranger";
    case Metric::kVfgReward: return "dafl";
    case Metric::kUniform: return "afl";
  }
  return "staczzer";
}

std::optional<Metric> ParseMetricTag(const std::string& tag) {
  if (tag == "staczzer") return Metric::kStackOverlap;
  if (tag == "aflgo") return Metric::kCfgHarmonic;
  if (tag == "windranger") return Metric::kDbbMean;
  if (tag == "dafl") return Metric::kVfgReward;
  if (tag == "afl") return Metric::kUniform;
  return std::nullopt;
}

ScoreValue ScoreCfgHarmonic(std::span<const LocationId> trace,
                            const DistanceMap& cfg_distance) {
  double reciprocal_sum = 0.0;
  size_t count = 0;
  for (LocationId loc : trace) {
    if (!cfg_distance.Reachable(loc)) continue;
    int64_t d = cfg_distance.At(loc);
    if (d == 0) continue;
    reciprocal_sum += 1.0 / static_cast<double>(d);
    ++count;
  }
  if (count == 0) return kInf;
  return static_cast<double>(count) / reciprocal_sum;
}

ScoreValue ScoreDbbMean(std::span<const LocationId> trace,
                        std::span<const LocationId> deviation_blocks,
                        const DistanceMap& cfg_distance) {
  int64_t sum = 0;
  size_t count = 0;
  for (LocationId loc : trace) {
    if (!std::binary_search(deviation_blocks.begin(), deviation_blocks.end(),
                            loc)) {
      continue;
    }
    sum += cfg_distance.At(loc);  // deviation blocks are finite by definition
    ++count;
  }
  if (count == 0) return kInf;
  return static_cast<double>(sum) / static_cast<double>(count);
}

ScoreValue ScoreVfgReward(std::span<const LocationId> trace,
                          const DistanceMap& vfg_distance,
                          int64_t max_finite_distance) {
  int64_t sum = 0;
  for (LocationId loc : trace) {
    if (!vfg_distance.Reachable(loc)) continue;
    sum += max_finite_distance - vfg_distance.At(loc) + 1;
  }
  return static_cast<double>(sum);
}

ScoreValue ScoreStackOverlap(std::span<const LocationId> trace,
                             std::span<const LocationId> predicted_sites) {
  size_t overlap = 0;
  for (LocationId loc : trace) {
    if (std::binary_search(predicted_sites.begin(), predicted_sites.end(),
                           loc)) {
      ++overlap;
    }
  }
  return static_cast<double>(overlap);
}

}  // namespace stackfuzz
