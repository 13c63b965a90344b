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

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "stackfuzz/bench.hpp"
#include "stackfuzz/builtin.hpp"
#include "stackfuzz/campaign.hpp"
#include "stackfuzz/generator.hpp"
#include "stackfuzz/predictor.hpp"
#include "stackfuzz/util.hpp"

namespace {

using stackfuzz::Benchmark;

stackfuzz::LocationId ResolveTarget(const Benchmark& bench,
                                    const std::string& target_flag) {
  if (target_flag.empty()) return bench.targets.front();
  auto loc = stackfuzz::ParseLocation(target_flag);
  if (!loc) {
    throw std::runtime_error("--target is not file:line: " + target_flag);
  }
  auto id = bench.program.FindLocation(*loc);
  if (!id) {
    throw std::runtime_error("--target is not a statement location: " +
                             target_flag);
  }
  return *id;
}

void EmitText(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    fmt::print("{}", text);
  } else {
    stackfuzz::WriteFile(out_path, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directed fuzzing engine driven by call-stack predictions"};
  app.require_subcommand(1);

  std::string benchmark_arg;
  std::string metric_tag = "staczzer";
  std::string predictor_tag = "ablation";
  std::string target_flag;
  std::string out_path;
  std::string endpoint_url;
  std::string model_name;
  std::string api_key_env = "OPENAI_API_KEY";
  double temperature = 1.0;
  int max_tokens = 2048;
  int max_retries = 3;
  uint64_t rng_seed = 0;
  uint64_t budget = 200'000;
  uint64_t step_limit = stackfuzz::kDefaultStepLimit;
  size_t max_input_len = 4096;
  bool keep_going = false;

  auto add_llm_flags = [&](CLI::App* cmd) {
    cmd->add_option("--endpoint", endpoint_url,
                    "Chat-completions base URL for the llm predictor");
    cmd->add_option("--model", model_name, "Model name for the llm predictor");
    cmd->add_option("--api-key-env", api_key_env,
                    "Environment variable holding the API token");
    cmd->add_option("--temperature", temperature, "Sampling temperature");
    cmd->add_option("--max-tokens", max_tokens, "Completion token cap");
    cmd->add_option("--max-retries", max_retries, "Attempts per prediction");
  };
  auto make_predictor_config = [&] {
    stackfuzz::PredictorConfig pc;
    auto strategy = stackfuzz::ParsePredictorTag(predictor_tag);
    if (!strategy) {
      throw std::runtime_error("unknown predictor: " + predictor_tag);
    }
    pc.strategy = *strategy;
    pc.endpoint_url = endpoint_url;
    pc.model_name = model_name;
    pc.api_key_env = api_key_env;
    pc.temperature = temperature;
    pc.max_tokens = max_tokens;
    pc.max_retries = max_retries;
    return pc;
  };

  // --- run ---
  CLI::App* run = app.add_subcommand("run", "Run one fuzzing campaign");
  run->add_option("benchmark", benchmark_arg,
                  "Benchmark path or built-in name")
      ->required();
  run->add_option("--metric", metric_tag,
                  "staczzer | aflgo | windranger | dafl | afl");
  run->add_option("--predictor", predictor_tag,
                  "oracle | ablation | llm | mock");
  run->add_option("--rng-seed", rng_seed, "Campaign rng seed");
  run->add_option("--budget", budget, "Execution budget");
  run->add_option("--step-limit", step_limit, "Per-execution step limit");
  run->add_option("--max-input-len", max_input_len, "Input length cap");
  run->add_flag("--keep-going", keep_going,
                "Continue after the first target crash");
  run->add_option("--out", out_path, "Write the report here (default stdout)");
  std::string crash_dir;
  run->add_option("--crash-dir", crash_dir,
                  "Dump each crash input as a hex file into this directory");
  add_llm_flags(run);

  // --- bench ---
  CLI::App* bench = app.add_subcommand("bench", "Statistical benchmarking");
  bench->require_subcommand(1);

  std::string suite_path;
  std::string output_dir;
  uint32_t reps_override = 0;
  uint64_t budget_override = 0;
  uint32_t parallelism_override = 0;
  CLI::App* bench_run =
      bench->add_subcommand("run", "Run a suite of repeated campaigns");
  bench_run->add_option("--suite", suite_path, "Suite configuration JSON")
      ->required();
  bench_run->add_option("--out", output_dir,
                        "Directory for reports, results.json and tables");
  bench_run->add_option("--reps", reps_override, "Override repetitions");
  bench_run->add_option("--budget", budget_override,
                        "Override execution budget");
  bench_run->add_option("--parallelism", parallelism_override,
                        "Override worker count");

  std::string results_path;
  std::string baseline_tag;
  std::string subject_tag = "staczzer+oracle";
  CLI::App* bench_compare =
      bench->add_subcommand("compare", "Compare two configs in a results file");
  bench_compare->add_option("--results", results_path, "results.json path")
      ->required();
  bench_compare->add_option("--baseline", baseline_tag, "Baseline config tag")
      ->required();
  bench_compare->add_option("--subject", subject_tag, "Subject config tag");

  // --- gen ---
  std::string gen_dir = "generated";
  uint32_t gen_count = 12;
  stackfuzz::GeneratorConfig gen_config;
  CLI::App* gen = app.add_subcommand(
      "gen", "Generate a suite of synthetic gated-chain benchmarks");
  gen->add_option("--dir", gen_dir, "Output directory");
  gen->add_option("--count", gen_count, "Number of benchmarks");
  gen->add_option("--seed", gen_config.seed, "Generator seed");
  gen->add_option("--min-depth", gen_config.min_depth, "Shortest call chain");
  gen->add_option("--max-depth", gen_config.max_depth, "Longest call chain");
  gen->add_option("--decoy-branches", gen_config.decoy_branches,
                  "Independent branches in the decoy routine");

  // --- slice ---
  CLI::App* slice = app.add_subcommand(
      "slice", "Print the annotated code slice for a target");
  slice->add_option("benchmark", benchmark_arg, "Benchmark path or name")
      ->required();
  slice->add_option("--target", target_flag, "file:line (default: first)");
  slice->add_option("--out", out_path, "Write here instead of stdout");

  // --- predict ---
  CLI::App* predict = app.add_subcommand(
      "predict", "Print the predicted crash call stack for a target");
  predict->add_option("benchmark", benchmark_arg, "Benchmark path or name")
      ->required();
  predict->add_option("--predictor", predictor_tag,
                      "oracle | ablation | llm | mock");
  predict->add_option("--target", target_flag, "file:line (default: first)");
  add_llm_flags(predict);

  // --- dump ---
  CLI::App* dump = app.add_subcommand(
      "dump", "Print program structure and metric inputs for a benchmark");
  dump->add_option("benchmark", benchmark_arg, "Benchmark path or name")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      Benchmark bench_data = stackfuzz::ResolveBenchmark(benchmark_arg);
      stackfuzz::CampaignConfig cc;
      auto metric = stackfuzz::ParseMetricTag(metric_tag);
      if (!metric) throw std::runtime_error("unknown metric: " + metric_tag);
      cc.metric = *metric;
      cc.predictor = make_predictor_config();
      cc.rng_seed = rng_seed;
      cc.max_executions = budget;
      cc.step_limit = step_limit;
      cc.max_input_len = max_input_len;
      cc.stop_on_target = !keep_going;
      stackfuzz::CampaignReport report = stackfuzz::RunCampaign(bench_data, cc);
      EmitText(out_path, report.ToJson(bench_data.program).dump(2) + "\n");
      if (!crash_dir.empty()) {
        std::filesystem::create_directories(crash_dir);
        for (size_t i = 0; i < report.crashes.size(); ++i) {
          stackfuzz::WriteFile(
              fmt::format("{}/crash_{:03}.hex", crash_dir, i),
              stackfuzz::FormatHex(report.crashes[i].input) + "\n");
        }
      }
      return 0;
    }

    if (bench_run->parsed()) {
      nlohmann::json doc =
          nlohmann::json::parse(stackfuzz::ReadFile(suite_path));
      stackfuzz::SuiteConfig config = stackfuzz::SuiteConfig::FromJson(doc);
      if (reps_override) config.repetitions = reps_override;
      if (budget_override) config.budget_executions = budget_override;
      if (parallelism_override) config.parallelism = parallelism_override;
      if (!output_dir.empty()) config.output_dir = output_dir;
      std::function<void(const std::string&)> progress =
          [](const std::string& line) { fmt::print(stderr, "{}\n", line); };
      stackfuzz::SuiteResult result = stackfuzz::RunSuite(config, &progress);
      std::string subject =
          config.configs.empty() ? "" : config.configs.front().Tag();
      fmt::print("{}", stackfuzz::RenderTable(result, subject));
      return 0;
    }

    if (bench_compare->parsed()) {
      stackfuzz::SuiteResult result = stackfuzz::SuiteResult::FromJson(
          nlohmann::json::parse(stackfuzz::ReadFile(results_path)));
      stackfuzz::Comparison cmp =
          stackfuzz::Compare(result, baseline_tag, subject_tag);
      for (const stackfuzz::ComparisonRow& row : cmp.rows) {
        fmt::print("{:<16} subject {:>12}{} baseline {:>12}{} ratio {:>8.2f} "
                   "{}\n",
                   row.benchmark, row.subject.value,
                   row.subject.reproducible ? " " : "*", row.baseline.value,
                   row.baseline.reproducible ? " " : "*", row.ratio,
                   row.winner > 0   ? "subject"
                   : row.winner < 0 ? "baseline"
                                    : "tie");
      }
      fmt::print("wins {} losses {} ties {} avg ratio {:.2f} p {:.4g}\n",
                 cmp.wins, cmp.losses, cmp.ties, cmp.average_ratio,
                 cmp.p_value);
      return 0;
    }

    if (gen->parsed()) {
      std::string suite =
          stackfuzz::GenerateSuite(gen_dir, gen_count, gen_config);
      fmt::print("{}\n", suite);
      return 0;
    }

    if (slice->parsed()) {
      Benchmark bench_data = stackfuzz::ResolveBenchmark(benchmark_arg);
      stackfuzz::CallGraph cg = stackfuzz::BuildCallGraph(bench_data.program);
      stackfuzz::LocationId target = ResolveTarget(bench_data, target_flag);
      auto reachable = stackfuzz::ReachableFunctions(
          cg, bench_data.program.stmt_at[target].function);
      stackfuzz::CodeSlice code =
          stackfuzz::RenderSlice(bench_data.program, cg, reachable, target);
      EmitText(out_path, code.text);
      return 0;
    }

    if (predict->parsed()) {
      Benchmark bench_data = stackfuzz::ResolveBenchmark(benchmark_arg);
      stackfuzz::CallGraph cg = stackfuzz::BuildCallGraph(bench_data.program);
      stackfuzz::LocationId target = ResolveTarget(bench_data, target_flag);
      stackfuzz::PredictionOutcome outcome =
          stackfuzz::Predict(make_predictor_config(), bench_data, cg, target);
      for (const std::string& warning : outcome.warnings) {
        fmt::print(stderr, "warning: {}\n", warning);
      }
      for (stackfuzz::LocationId frame : outcome.stack.frames) {
        fmt::print("{}\n", stackfuzz::FormatLocation(
                               bench_data.program.locations.Get(frame)));
      }
      return 0;
    }

    if (dump->parsed()) {
      Benchmark bench_data = stackfuzz::ResolveBenchmark(benchmark_arg);
      const stackfuzz::TargetProgram& program = bench_data.program;
      fmt::print("benchmark: {}\n", bench_data.name);
      fmt::print("entry: {}\n", program.functions[program.entry].name);
      fmt::print("functions: {}\n", program.functions.size());
      fmt::print("statements: {}\n", program.locations.size());
      stackfuzz::FlowGraph cfg = stackfuzz::BuildCfg(program);
      stackfuzz::LocationId target = bench_data.targets.front();
      stackfuzz::DistanceMap dm = stackfuzz::ComputeDistances(
          cfg, target, program.locations.size());
      fmt::print("target: {}\n",
                 stackfuzz::FormatLocation(program.locations.Get(target)));
      fmt::print("cfg distances:\n");
      for (stackfuzz::LocationId node : cfg.nodes) {
        fmt::print("  {} -> {}\n",
                   stackfuzz::FormatLocation(program.locations.Get(node)),
                   dm.Reachable(node) ? std::to_string(dm.At(node))
                                      : std::string("unreachable"));
      }
      auto dbbs = stackfuzz::DeviationBasicBlocks(cfg, dm);
      fmt::print("deviation blocks:");
      for (stackfuzz::LocationId b : dbbs) {
        fmt::print(" {}",
                   stackfuzz::FormatLocation(program.locations.Get(b)));
      }
      fmt::print("\n");
      stackfuzz::FlowGraph vfg =
          stackfuzz::BuildVfg(program, bench_data.vfg_edges);
      stackfuzz::DistanceMap vdm = stackfuzz::ComputeDistances(
          vfg, target, program.locations.size());
      fmt::print("vfg nodes {} edges {} max finite distance {}\n",
                 vfg.nodes.size(), vfg.edges.size(),
                 stackfuzz::MaxFiniteDistance(vfg, vdm));
      return 0;
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
