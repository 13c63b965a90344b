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
// Statistical benchmark harness: repeated campaigns per (benchmark,
// configuration) cell, median time-to-exposure with a penalty rule, pairwise
// win/loss comparison and an exact one-tailed sign test.

#ifndef STACKFUZZ_BENCH_HPP_
#define STACKFUZZ_BENCH_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stackfuzz/campaign.hpp"

namespace stackfuzz {

// A fuzzer configuration under test. The predictor is meaningful only for
// metrics that consume predictions; Tag() renders "metric+predictor" or the
// bare metric ("staczzer+oracle", "afl").
struct BenchComboConfig {
  Metric metric = Metric::kUniform;
  std::optional<PredictorStrategy> predictor;

  std::string Tag() const;
};
std::optional<BenchComboConfig> ParseComboTag(const std::string& tag);

struct SuiteConfig {
  std::vector<std::string> benchmarks;      // paths or builtin names
  std::vector<BenchComboConfig> configs;
  uint32_t repetitions = 20;
  uint64_t budget_executions = 200'000;
  uint64_t step_limit = kDefaultStepLimit;
  size_t max_input_len = 4096;
  uint32_t parallelism = 1;
  std::string output_dir;                   // empty: nothing written
  PredictorConfig llm;                      // endpoint etc. for llm configs

  static SuiteConfig FromJson(const nlohmann::json& doc);
};

struct RepetitionResult {
  bool success = false;                     // target crash within budget
  uint64_t tte_executions = 0;              // valid when success
  bool error = false;                       // campaign raised; details logged
  std::string error_message;
};

// results["bench"]["cfgtag"][rep]
struct SuiteResult {
  uint32_t repetitions = 0;
  uint64_t budget_executions = 0;
  std::map<std::string, std::map<std::string, std::vector<RepetitionResult>>>
      cells;

  nlohmann::json ToJson() const;            // versioned, stable
  static SuiteResult FromJson(const nlohmann::json& doc);
};

struct MedianResult {
  uint64_t value = 0;        // lower median, or 2*limit when irreproducible
  bool reproducible = false;
  uint32_t successes = 0;
};

// Failures count as +infinity. Reproducible needs a strict majority of
// successes (at least half failing triggers the 2*limit penalty; for even
// counts exactly half failing already does). The reported value is the lower
// median when reproducible.
MedianResult MedianTte(const std::vector<std::optional<uint64_t>>& outcomes,
                       uint64_t limit);

// One-tailed exact sign test: P[X >= wins] for X ~ Binomial(wins+losses,
// 1/2), evaluated in exact big-integer rationals and rounded once at the
// end. Ties are excluded by the caller. wins + losses == 0 gives 1.0.
double SignTest(uint64_t wins, uint64_t losses);

struct ComparisonRow {
  std::string benchmark;
  MedianResult baseline;
  MedianResult subject;
  int winner = 0;            // +1 subject, -1 baseline, 0 tie
  double ratio = 1.0;        // baseline value / subject value (penalties in)
};

struct Comparison {
  std::string baseline_tag;
  std::string subject_tag;
  std::vector<ComparisonRow> rows;
  uint32_t wins = 0;         // subject better
  uint32_t losses = 0;
  uint32_t ties = 0;
  double p_value = 1.0;
  double average_ratio = 1.0;
};

// Per benchmark: both reproducible -> smaller median wins (equal ties);
// one reproducible -> it wins; neither -> more successes wins (equal ties).
Comparison Compare(const SuiteResult& results, const std::string& baseline_tag,
                   const std::string& subject_tag);

// Runs repetitions * |benchmarks| * |configs| campaigns over a worker pool.
// Each campaign's rng seed is a stable hash of (benchmark, config tag,
// repetition), so reruns of the same SuiteConfig reproduce the same results
// byte for byte. When output_dir is set, writes per-campaign reports,
// results.json, table.txt and table.csv.
SuiteResult RunSuite(const SuiteConfig& config,
                     const std::function<void(const std::string&)>* progress =
                         nullptr);

// Fixed-width summary table: one row per benchmark, the subject's median
// first, then each baseline's median and baseline/subject ratio; footer with
// average ratios, win/loss/tie counts and sign-test p-values.
std::string RenderTable(const SuiteResult& results,
                        const std::string& subject_tag);
std::string RenderCsv(const SuiteResult& results,
                      const std::string& subject_tag);

}  // namespace stackfuzz

#endif  // STACKFUZZ_BENCH_HPP_
