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

#include "stackfuzz/scheduler.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace stackfuzz {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

// Energies sit on ceil() boundaries, so they are computed in exact rational
// arithmetic; doubles would make batch sizes platform-dependent.
uint64_t CeilToU64(const cpp_rational& r) {
  cpp_int num = numerator(r);
  cpp_int den = denominator(r);  // always > 0
  cpp_int q = num / den;
  if (num % den != 0 && num > 0) ++q;
  if (q < 0) q = 0;
  return q.convert_to<uint64_t>();
}

cpp_rational Clamp(const cpp_rational& r) {
  static const cpp_rational lo(1, 4);
  static const cpp_rational hi(4, 1);
  if (r < lo) return lo;
  if (r > hi) return hi;
  return r;
}

cpp_rational RationalFromDouble(double value) {
  // Exact: every finite double is mantissa * 2^exponent.
  int exp = 0;
  double mant = std::frexp(value, &exp);
  auto scaled = static_cast<int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  cpp_rational r(scaled);
  if (exp > 0) {
    r *= boost::multiprecision::pow(cpp_int(2), exp);
  } else if (exp < 0) {
    r /= boost::multiprecision::pow(cpp_int(2), -exp);
  }
  return r;
}

}  // namespace

uint32_t Scheduler::AddSeed(std::vector<uint8_t> input, ExecutionResult result,
                            ScoreValue score, uint64_t discovery_execution) {
  Seed seed;
  seed.id = static_cast<uint32_t>(seeds_.size());
  seed.input = std::move(input);
  seed.result = std::move(result);
  seed.scores[metric_] = score;
  seed.discovery_execution = discovery_execution;

  total_steps_ += static_cast<double>(seed.result.step_count);
  total_trace_ += static_cast<double>(seed.result.trace.size());
  if (std::isfinite(score)) score_sum_ += score;

  seeds_.push_back(std::move(seed));
  chosen_.push_back(0);
  return seeds_.back().id;
}

uint32_t Scheduler::ChooseSeed() {
  if (seeds_.empty()) {
    throw std::logic_error("ChooseSeed on an empty corpus");
  }
  const bool reward_like = MetricPolarity(metric_) == Polarity::kRewardLike;
  uint32_t best = 0;
  bool have = false;
  ScoreValue best_score = 0;
  for (uint32_t id = 0; id < seeds_.size(); ++id) {
    if (chosen_[id]) continue;
    ScoreValue s = seeds_[id].scores.at(metric_);
    // Strict comparison keeps the smallest id on ties.
    if (!have || (reward_like ? s > best_score : s < best_score)) {
      best = id;
      best_score = s;
      have = true;
    }
  }
  chosen_[best] = 1;
  if (++chosen_count_ == seeds_.size()) {
    std::fill(chosen_.begin(), chosen_.end(), 0);
    chosen_count_ = 0;
  }
  return best;
}

uint64_t Scheduler::BaseEnergy(const Seed& seed) const {
  size_t n = seeds_.size();
  if (n == 0) return kBaseEnergyUnit;

  // speed ratio: corpus-average steps over this seed's steps.
  cpp_rational speed(1);
  if (seed.result.step_count > 0 && total_steps_ > 0) {
    speed = RationalFromDouble(total_steps_) /
            cpp_rational(cpp_int(n) * cpp_int(seed.result.step_count));
  }
  // coverage ratio: this seed's trace size over the corpus average.
  cpp_rational coverage(1);
  if (total_trace_ > 0) {
    coverage = cpp_rational(cpp_int(seed.result.trace.size()) * cpp_int(n)) /
               RationalFromDouble(total_trace_);
  }
  cpp_rational energy =
      cpp_rational(kBaseEnergyUnit) * Clamp(speed) * Clamp(coverage);
  uint64_t result = CeilToU64(energy);
  return result == 0 ? 1 : result;
}

uint64_t Scheduler::AssignEnergy(const Seed& seed) const {
  uint64_t base = BaseEnergy(seed);
  if (score_sum_ <= 0) return base;
  ScoreValue score = seed.scores.at(metric_);
  if (!std::isfinite(score)) return base;

  // ceil(score / mean * base) with mean = score_sum / n, all exact.
  cpp_rational scaled = RationalFromDouble(score) *
                        cpp_rational(cpp_int(seeds_.size())) *
                        cpp_rational(cpp_int(base)) /
                        RationalFromDouble(score_sum_);
  uint64_t result = CeilToU64(scaled);
  return result == 0 ? 1 : result;
}

uint64_t Scheduler::EnergyFor(const Seed& seed) const {
  return metric_ == Metric::kStackOverlap ? AssignEnergy(seed)
                                          : BaseEnergy(seed);
}

}  // namespace stackfuzz
