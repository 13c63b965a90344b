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

#include "stackfuzz/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <memory>

#include "stackfuzz/callgraph.hpp"
#include "stackfuzz/executor.hpp"
#include "stackfuzz/mutation.hpp"
#include "stackfuzz/scheduler.hpp"
#include "stackfuzz/util.hpp"

namespace stackfuzz {

TriageVerdict Triage(const ExecutionResult& result,
                     std::span<const LocationId> targets,
                     uint64_t step_limit) {
  if (result.crashed) {
    for (LocationId t : targets) {
      if (result.crash_location == t) return TriageVerdict::kTargetCrash;
    }
    return TriageVerdict::kOtherCrash;
  }
  if (result.step_count >= step_limit) return TriageVerdict::kHang;
  return TriageVerdict::kNoCrash;
}

namespace {

// Trace sets already in the corpus, hashed for the common miss path and
// compared in full on hash hits.
class TraceSetIndex {
 public:
  bool Insert(const std::vector<LocationId>& trace) {
    uint64_t h = Fnv1a64(reinterpret_cast<const uint8_t*>(trace.data()),
                         trace.size() * sizeof(LocationId));
    auto& bucket = buckets_[h];
    for (const auto& existing : bucket) {
      if (existing == trace) return false;
    }
    bucket.push_back(trace);
    return true;
  }

 private:
  std::map<uint64_t, std::vector<std::vector<LocationId>>> buckets_;
};

struct MetricMachinery {
  std::function<ScoreValue(const ExecutionResult&)> score;
  std::string predictor_used = "none";
  bool predictor_downgraded = false;
  std::vector<std::string> predictor_warnings;
  double prediction_latency_seconds = 0;
};

MetricMachinery PrepareMetric(const Benchmark& benchmark,
                              const CampaignConfig& config,
                              ChatClient* llm_client) {
  MetricMachinery m;
  const TargetProgram& program = benchmark.program;
  LocationId target = benchmark.targets.front();

  switch (config.metric) {
    case Metric::kUniform:
      m.score = [](const ExecutionResult&) { return ScoreValue{0}; };
      return m;

    case Metric::kCfgHarmonic: {
      auto dm = std::make_shared<DistanceMap>(
          ComputeDistances(BuildCfg(program), target,
                           program.locations.size()));
      m.score = [dm](const ExecutionResult& r) {
        return ScoreCfgHarmonic(r.trace, *dm);
      };
      return m;
    }

    case Metric::kDbbMean: {
      FlowGraph cfg = BuildCfg(program);
      auto dm = std::make_shared<DistanceMap>(
          ComputeDistances(cfg, target, program.locations.size()));
      auto dbbs = std::make_shared<std::vector<LocationId>>(
          DeviationBasicBlocks(cfg, *dm));
      m.score = [dm, dbbs](const ExecutionResult& r) {
        return ScoreDbbMean(r.trace, *dbbs, *dm);
      };
      return m;
    }

    case Metric::kVfgReward: {
      FlowGraph vfg = BuildVfg(program, benchmark.vfg_edges);
      auto dm = std::make_shared<DistanceMap>(
          ComputeDistances(vfg, target, program.locations.size()));
      int64_t l_max = MaxFiniteDistance(vfg, *dm);
      m.score = [dm, l_max](const ExecutionResult& r) {
        return ScoreVfgReward(r.trace, *dm, l_max);
      };
      return m;
    }

    case Metric::kStackOverlap:
      break;
  }

  CallGraph cg = BuildCallGraph(program);
  PredictionOutcome outcome;
  m.predictor_used = PredictorTag(config.predictor.strategy);
  if (config.predictor.strategy == PredictorStrategy::kLlm) {
    auto started = std::chrono::steady_clock::now();
    try {
      outcome = Predict(config.predictor, benchmark, cg, target, llm_client);
    } catch (const PredictionInvalidError& e) {
      m.predictor_downgraded = true;
      m.predictor_warnings.push_back(
          std::string("llm prediction unusable, downgrading to ablation: ") +
          e.what());
    } catch (const ChatTransportError& e) {
      // Unusable model output has the ablation fallback; a dead transport is
      // a hard predictor failure and fails the campaign outright.
      throw CampaignError(std::string("llm transport failed: ") + e.what());
    }
    m.prediction_latency_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      started)
            .count();
    if (m.predictor_downgraded) {
      PredictorConfig fallback = config.predictor;
      fallback.strategy = PredictorStrategy::kAblation;
      outcome = Predict(fallback, benchmark, cg, target, nullptr);
      m.predictor_used = PredictorTag(PredictorStrategy::kAblation);
    }
  } else {
    outcome = Predict(config.predictor, benchmark, cg, target, llm_client);
  }
  m.predictor_warnings.insert(m.predictor_warnings.end(),
                              outcome.warnings.begin(),
                              outcome.warnings.end());
  auto predicted =
      std::make_shared<std::vector<LocationId>>(outcome.stack.as_set);
  m.score = [predicted](const ExecutionResult& r) {
    return ScoreStackOverlap(r.trace, *predicted);
  };
  return m;
}

}  // namespace

CampaignReport RunCampaign(const Benchmark& benchmark,
                           const CampaignConfig& config,
                           ChatClient* llm_client) {
  if (benchmark.targets.empty()) {
    throw CampaignError("benchmark has no targets");
  }
  const TargetProgram& program = benchmark.program;

  CampaignReport report;
  report.benchmark = benchmark.name;
  report.metric = config.metric;
  report.rng_seed = config.rng_seed;
  report.max_executions = config.max_executions;
  report.step_limit = config.step_limit;
  report.max_input_len = config.max_input_len;
  report.stop_on_target = config.stop_on_target;

  MetricMachinery machinery = PrepareMetric(benchmark, config, llm_client);
  report.predictor_used = machinery.predictor_used;
  report.predictor_downgraded = machinery.predictor_downgraded;
  report.predictor_warnings = machinery.predictor_warnings;

  Scheduler scheduler(config.metric);
  TraceSetIndex seen_traces;
  Rng rng(config.rng_seed);
  MutationConfig mutation_config{config.max_input_len};

  uint64_t steps_total = 0;
  auto simulated_seconds = [&] {
    return static_cast<double>(steps_total) * 1e-6 +
           machinery.prediction_latency_seconds;
  };

  bool done = false;
  // Runs one input through the program and performs all bookkeeping.
  // Initial seeds are the round-zero basis and always join the corpus;
  // only mutants are gated on producing a previously unseen trace set.
  auto run_one = [&](const std::vector<uint8_t>& input, bool initial) {
    ExecutionResult result = Execute(program, input, config.step_limit);
    ++report.executions;
    steps_total += result.step_count;

    switch (Triage(result, benchmark.targets, config.step_limit)) {
      case TriageVerdict::kTargetCrash: {
        report.crashes.push_back(CrashRecord{input, result.crash_location,
                                             result.crash_stack,
                                             report.executions});
        if (!report.target_hit) {
          report.target_hit = true;
          report.tte_executions = report.executions;
          report.tte_wall_seconds = simulated_seconds();
        }
        if (config.stop_on_target) done = true;
        return;
      }
      case TriageVerdict::kOtherCrash:
        report.crashes.push_back(CrashRecord{input, result.crash_location,
                                             result.crash_stack,
                                             report.executions});
        return;
      case TriageVerdict::kHang:
        ++report.hangs;
        return;
      case TriageVerdict::kNoCrash:
        break;
    }
    bool fresh = seen_traces.Insert(result.trace);
    if (fresh || initial) {
      ScoreValue score = machinery.score(result);
      scheduler.AddSeed(input, std::move(result), score, report.executions);
      report.corpus_growth.emplace_back(report.executions,
                                        scheduler.seeds().size());
    }
  };

  for (const std::vector<uint8_t>& seed : benchmark.seeds) {
    if (done || report.executions >= config.max_executions ||
        simulated_seconds() >= config.max_wall_seconds) {
      break;
    }
    run_one(seed, /*initial=*/true);
  }

  if (!done && scheduler.empty()) {
    throw CampaignError(
        "no usable seeds: every initial input crashed or hung");
  }

  while (!done && report.executions < config.max_executions &&
         simulated_seconds() < config.max_wall_seconds) {
    uint32_t id = scheduler.ChooseSeed();
    // Energy is fixed at choice time; the batch ends early only when a
    // budget runs out or a target crash stops the campaign.
    uint64_t energy = scheduler.EnergyFor(scheduler.seed(id));
    for (uint64_t i = 0; i < energy; ++i) {
      if (done || report.executions >= config.max_executions ||
          simulated_seconds() >= config.max_wall_seconds) {
        break;
      }
      std::vector<uint8_t> child =
          Mutate(scheduler.seed(id).input, rng, mutation_config);
      run_one(child, /*initial=*/false);
    }
  }

  report.corpus_size = scheduler.seeds().size();
  return report;
}

nlohmann::json CampaignReport::ToJson(const TargetProgram& program) const {
  for (const CrashRecord& crash : crashes) {
    ExecutionResult replay = Execute(program, crash.input, step_limit);
    if (!replay.crashed || replay.crash_location != crash.location ||
        replay.crash_stack != crash.stack) {
      throw CampaignError(
          "crash at execution " + std::to_string(crash.execution) +
          " does not reproduce from its recorded input");
    }
  }

  auto loc_string = [&](LocationId id) {
    return FormatLocation(program.locations.Get(id));
  };

  nlohmann::json doc;
  doc["benchmark"] = benchmark;
  doc["metric"] = MetricTag(metric);
  doc["predictor_used"] = predictor_used;
  doc["predictor_downgraded"] = predictor_downgraded;
  doc["predictor_warnings"] = predictor_warnings;
  doc["rng_seed"] = rng_seed;
  doc["max_executions"] = max_executions;
  doc["step_limit"] = step_limit;
  doc["max_input_len"] = max_input_len;
  doc["stop_on_target"] = stop_on_target;
  doc["target_hit"] = target_hit;
  if (tte_executions) {
    doc["tte_executions"] = *tte_executions;
  } else {
    doc["tte_executions"] = nullptr;
  }
  if (tte_wall_seconds) {
    doc["tte_wall_seconds"] = *tte_wall_seconds;
  } else {
    doc["tte_wall_seconds"] = nullptr;
  }
  doc["executions"] = executions;
  doc["hangs"] = hangs;
  doc["corpus_size"] = corpus_size;
  nlohmann::json growth = nlohmann::json::array();
  for (const auto& [execs, size] : corpus_growth) {
    growth.push_back({execs, size});
  }
  doc["corpus_growth"] = growth;
  nlohmann::json crash_list = nlohmann::json::array();
  for (const CrashRecord& crash : crashes) {
    nlohmann::json c;
    c["input"] = FormatHex(crash.input);
    c["location"] = loc_string(crash.location);
    nlohmann::json stack = nlohmann::json::array();
    for (LocationId frame : crash.stack) stack.push_back(loc_string(frame));
    c["stack"] = stack;
    c["execution"] = crash.execution;
    crash_list.push_back(c);
  }
  doc["crashes"] = crash_list;
  return doc;
}

}  // namespace stackfuzz
