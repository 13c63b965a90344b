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
// One fuzzing campaign: predict (when the metric consumes a predicted
// stack), seed the corpus, then loop choose/energize/mutate/execute,
// retaining children whose trace set is new and collecting crashes, until
// the budget runs out or a target crashes.

#ifndef STACKFUZZ_CAMPAIGN_HPP_
#define STACKFUZZ_CAMPAIGN_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stackfuzz/executor.hpp"
#include "stackfuzz/loader.hpp"
#include "stackfuzz/metrics.hpp"
#include "stackfuzz/predictor.hpp"

namespace stackfuzz {

class CampaignError : public std::runtime_error {
 public:
  explicit CampaignError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CampaignConfig {
  Metric metric = Metric::kStackOverlap;
  PredictorConfig predictor;
  uint64_t rng_seed = 0;
  uint64_t max_executions = 200'000;
  // Simulated-time budget (see CampaignReport::tte_wall_seconds). Unlimited
  // by default; executions are the primary budget at this scale.
  double max_wall_seconds = std::numeric_limits<double>::infinity();
  uint64_t step_limit = kDefaultStepLimit;
  size_t max_input_len = 4096;
  bool stop_on_target = true;
};

enum class TriageVerdict : uint8_t { kTargetCrash, kOtherCrash, kHang,
                                     kNoCrash };

// Hang wins over nothing else (a crashed run halted before the limit);
// crashes split on whether the site is one of the campaign targets.
TriageVerdict Triage(const ExecutionResult& result,
                     std::span<const LocationId> targets,
                     uint64_t step_limit);

struct CrashRecord {
  std::vector<uint8_t> input;
  LocationId location = 0;
  std::vector<LocationId> stack;   // innermost first
  uint64_t execution = 0;          // executions done when found
};

struct CampaignReport {
  std::string benchmark;
  Metric metric = Metric::kStackOverlap;
  // "none" when the metric does not consume predictions.
  std::string predictor_used;
  bool predictor_downgraded = false;
  std::vector<std::string> predictor_warnings;
  uint64_t rng_seed = 0;
  uint64_t max_executions = 0;
  uint64_t step_limit = 0;
  size_t max_input_len = 0;
  bool stop_on_target = true;

  bool target_hit = false;
  std::optional<uint64_t> tte_executions;
  // Simulated wall clock: executed steps at 1 microsecond each, plus
  // measured prediction latency for the llm strategy (zero otherwise, which
  // keeps non-llm reports bit-reproducible).
  std::optional<double> tte_wall_seconds;
  uint64_t executions = 0;
  uint64_t hangs = 0;
  size_t corpus_size = 0;
  std::vector<std::pair<uint64_t, size_t>> corpus_growth;  // (execs, size)
  std::vector<CrashRecord> crashes;

  // Stable key order, deterministic float rendering. Re-executes every crash
  // input against `program` and throws CampaignError if one fails to
  // reproduce its recorded location and stack.
  nlohmann::json ToJson(const TargetProgram& program) const;
};

CampaignReport RunCampaign(const Benchmark& benchmark,
                           const CampaignConfig& config,
                           ChatClient* llm_client = nullptr);

}  // namespace stackfuzz

#endif  // STACKFUZZ_CAMPAIGN_HPP_
