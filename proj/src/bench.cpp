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

#include "stackfuzz/bench.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <mutex>
#include <thread>

#include <boost/multiprecision/cpp_int.hpp>
#include <fmt/format.h>

#include "stackfuzz/util.hpp"

namespace stackfuzz {

namespace {
using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;
using nlohmann::json;
}  // namespace

std::string BenchComboConfig::Tag() const {
  std::string tag = MetricTag(metric);
  if (predictor) tag += "+" + PredictorTag(*predictor);
  return tag;
}

std::optional<BenchComboConfig> ParseComboTag(const std::string& tag) {
  BenchComboConfig combo;
  size_t plus = tag.find('+');
  std::string metric_part = tag.substr(0, plus);
  auto metric = ParseMetricTag(metric_part);
  if (!metric) return std::nullopt;
  combo.metric = *metric;
  if (plus != std::string::npos) {
    auto predictor = ParsePredictorTag(tag.substr(plus + 1));
    if (!predictor) return std::nullopt;
    combo.predictor = predictor;
  }
  return combo;
}

SuiteConfig SuiteConfig::FromJson(const json& doc) {
  if (!doc.is_object()) throw DocumentError("suite: expected an object");
  SuiteConfig config;
  if (!doc.contains("benchmarks") || !doc.at("benchmarks").is_array() ||
      doc.at("benchmarks").empty()) {
    throw DocumentError("suite/benchmarks: expected a non-empty array");
  }
  for (const json& b : doc.at("benchmarks")) {
    if (!b.is_string()) {
      throw DocumentError("suite/benchmarks: expected strings");
    }
    config.benchmarks.push_back(b.get<std::string>());
  }
  if (!doc.contains("configs") || !doc.at("configs").is_array() ||
      doc.at("configs").empty()) {
    throw DocumentError("suite/configs: expected a non-empty array");
  }
  for (const json& c : doc.at("configs")) {
    if (!c.is_string()) throw DocumentError("suite/configs: expected strings");
    auto combo = ParseComboTag(c.get<std::string>());
    if (!combo) {
      throw DocumentError("suite/configs: unknown configuration tag \"" +
                          c.get<std::string>() + "\"");
    }
    config.configs.push_back(*combo);
  }
  auto read_uint = [&](const char* key, auto& into) {
    if (!doc.contains(key)) return;
    const json& v = doc.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() &&
                                     v.get<int64_t>() >= 0)) {
      throw DocumentError(std::string("suite/") + key +
                          ": expected a non-negative integer");
    }
    into = static_cast<std::decay_t<decltype(into)>>(v.get<uint64_t>());
  };
  read_uint("repetitions", config.repetitions);
  read_uint("budget_executions", config.budget_executions);
  read_uint("step_limit", config.step_limit);
  read_uint("max_input_len", config.max_input_len);
  read_uint("parallelism", config.parallelism);
  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string()) {
      throw DocumentError("suite/output_dir: expected a string");
    }
    config.output_dir = doc.at("output_dir").get<std::string>();
  }
  if (doc.contains("llm")) {
    const json& llm = doc.at("llm");
    if (!llm.is_object()) throw DocumentError("suite/llm: expected an object");
    auto read_str = [&](const char* key, std::string& into) {
      if (!llm.contains(key)) return;
      if (!llm.at(key).is_string()) {
        throw DocumentError(std::string("suite/llm/") + key +
                            ": expected a string");
      }
      into = llm.at(key).get<std::string>();
    };
    read_str("endpoint_url", config.llm.endpoint_url);
    read_str("model_name", config.llm.model_name);
    read_str("api_key_env", config.llm.api_key_env);
    if (llm.contains("temperature")) {
      config.llm.temperature = llm.at("temperature").get<double>();
    }
    if (llm.contains("max_tokens")) {
      config.llm.max_tokens = llm.at("max_tokens").get<int>();
    }
    if (llm.contains("max_retries")) {
      config.llm.max_retries = llm.at("max_retries").get<int>();
    }
  }
  if (config.repetitions == 0) {
    throw DocumentError("suite/repetitions: must be at least 1");
  }
  return config;
}

json SuiteResult::ToJson() const {
  json doc;
  doc["version"] = 1;
  doc["repetitions"] = repetitions;
  doc["budget_executions"] = budget_executions;
  json cells_json = json::object();
  for (const auto& [bench, tags] : cells) {
    json per_tag = json::object();
    for (const auto& [tag, reps] : tags) {
      json list = json::array();
      for (const RepetitionResult& r : reps) {
        json item;
        item["success"] = r.success;
        item["tte_executions"] = r.tte_executions;
        item["error"] = r.error;
        item["error_message"] = r.error_message;
        list.push_back(item);
      }
      per_tag[tag] = list;
    }
    cells_json[bench] = per_tag;
  }
  doc["cells"] = cells_json;
  return doc;
}

SuiteResult SuiteResult::FromJson(const json& doc) {
  if (!doc.is_object() || !doc.contains("version") ||
      doc.at("version") != 1) {
    throw DocumentError("results: unsupported document version");
  }
  SuiteResult result;
  result.repetitions = doc.at("repetitions").get<uint32_t>();
  result.budget_executions = doc.at("budget_executions").get<uint64_t>();
  for (const auto& [bench, tags] : doc.at("cells").items()) {
    for (const auto& [tag, reps] : tags.items()) {
      std::vector<RepetitionResult>& cell = result.cells[bench][tag];
      for (const json& item : reps) {
        RepetitionResult r;
        r.success = item.at("success").get<bool>();
        r.tte_executions = item.at("tte_executions").get<uint64_t>();
        r.error = item.value("error", false);
        r.error_message = item.value("error_message", std::string());
        cell.push_back(r);
      }
    }
  }
  return result;
}

MedianResult MedianTte(const std::vector<std::optional<uint64_t>>& outcomes,
                       uint64_t limit) {
  MedianResult result;
  std::vector<uint64_t> successes;
  for (const auto& o : outcomes) {
    if (o) successes.push_back(*o);
  }
  result.successes = static_cast<uint32_t>(successes.size());
  size_t n = outcomes.size();
  // Strict majority: with failures counted as +infinity, the lower median
  // is finite exactly when more than half of the runs succeeded.
  result.reproducible = n > 0 && successes.size() >= n / 2 + 1;
  if (!result.reproducible) {
    result.value = 2 * limit;
    return result;
  }
  std::sort(successes.begin(), successes.end());
  result.value = successes[(n - 1) / 2];
  return result;
}

double SignTest(uint64_t wins, uint64_t losses) {
  uint64_t n = wins + losses;
  if (n == 0) return 1.0;
  cpp_int binom = 1;  // C(n, i), starting at i = 0
  cpp_int tail = 0;
  for (uint64_t i = 0; i <= n; ++i) {
    if (i >= wins) tail += binom;
    binom = binom * cpp_int(n - i) / cpp_int(i + 1);
  }
  cpp_rational p(tail, cpp_int(1) << n);
  return p.convert_to<double>();
}

Comparison Compare(const SuiteResult& results, const std::string& baseline_tag,
                   const std::string& subject_tag) {
  Comparison cmp;
  cmp.baseline_tag = baseline_tag;
  cmp.subject_tag = subject_tag;

  auto outcomes_of = [](const std::vector<RepetitionResult>& reps) {
    std::vector<std::optional<uint64_t>> outcomes;
    for (const RepetitionResult& r : reps) {
      if (r.success && !r.error) {
        outcomes.emplace_back(r.tte_executions);
      } else {
        outcomes.emplace_back(std::nullopt);
      }
    }
    return outcomes;
  };

  double ratio_sum = 0;
  for (const auto& [bench, tags] : results.cells) {
    auto base_it = tags.find(baseline_tag);
    auto subj_it = tags.find(subject_tag);
    if (base_it == tags.end() || subj_it == tags.end()) {
      throw std::invalid_argument("benchmark " + bench +
                                  " lacks results for the compared configs");
    }
    ComparisonRow row;
    row.benchmark = bench;
    row.baseline =
        MedianTte(outcomes_of(base_it->second), results.budget_executions);
    row.subject =
        MedianTte(outcomes_of(subj_it->second), results.budget_executions);

    if (row.baseline.reproducible && row.subject.reproducible) {
      if (row.subject.value < row.baseline.value) row.winner = 1;
      else if (row.baseline.value < row.subject.value) row.winner = -1;
    } else if (row.subject.reproducible) {
      row.winner = 1;
    } else if (row.baseline.reproducible) {
      row.winner = -1;
    } else {
      if (row.subject.successes > row.baseline.successes) row.winner = 1;
      else if (row.baseline.successes > row.subject.successes) row.winner = -1;
    }
    row.ratio = static_cast<double>(row.baseline.value) /
                static_cast<double>(row.subject.value);
    ratio_sum += row.ratio;

    if (row.winner > 0) ++cmp.wins;
    else if (row.winner < 0) ++cmp.losses;
    else ++cmp.ties;
    cmp.rows.push_back(std::move(row));
  }
  cmp.p_value = SignTest(cmp.wins, cmp.losses);
  cmp.average_ratio = cmp.rows.empty()
                          ? 1.0
                          : ratio_sum / static_cast<double>(cmp.rows.size());
  return cmp;
}

SuiteResult RunSuite(const SuiteConfig& config,
                     const std::function<void(const std::string&)>* progress) {
  struct Job {
    size_t bench = 0;
    size_t combo = 0;
    uint32_t rep = 0;
  };

  std::vector<Benchmark> benchmarks;
  benchmarks.reserve(config.benchmarks.size());
  for (const std::string& name : config.benchmarks) {
    benchmarks.push_back(ResolveBenchmark(name));
  }
  std::vector<std::string> tags;
  for (const BenchComboConfig& combo : config.configs) {
    tags.push_back(combo.Tag());
  }

  SuiteResult result;
  result.repetitions = config.repetitions;
  result.budget_executions = config.budget_executions;
  for (const Benchmark& bench : benchmarks) {
    for (const std::string& tag : tags) {
      result.cells[bench.name][tag].resize(config.repetitions);
    }
  }

  if (!config.output_dir.empty()) {
    std::filesystem::create_directories(config.output_dir);
  }

  std::vector<Job> jobs;
  for (size_t b = 0; b < benchmarks.size(); ++b) {
    for (size_t c = 0; c < config.configs.size(); ++c) {
      for (uint32_t r = 0; r < config.repetitions; ++r) {
        jobs.push_back(Job{b, c, r});
      }
    }
  }

  std::atomic<size_t> next{0};
  std::mutex progress_mutex;

  auto worker = [&] {
    for (;;) {
      size_t index = next.fetch_add(1);
      if (index >= jobs.size()) return;
      const Job& job = jobs[index];
      const Benchmark& bench = benchmarks[job.bench];
      const BenchComboConfig& combo = config.configs[job.combo];
      const std::string& tag = tags[job.combo];

      CampaignConfig cc;
      cc.metric = combo.metric;
      cc.predictor = config.llm;
      cc.predictor.strategy =
          combo.predictor.value_or(PredictorStrategy::kAblation);
      cc.rng_seed = Fnv1a64(bench.name + "\x1f" + tag + "\x1f" +
                            std::to_string(job.rep));
      cc.max_executions = config.budget_executions;
      cc.step_limit = config.step_limit;
      cc.max_input_len = config.max_input_len;
      cc.stop_on_target = true;

      RepetitionResult& slot =
          result.cells[bench.name][tag][job.rep];
      try {
        CampaignReport report = RunCampaign(bench, cc);
        slot.success = report.target_hit;
        slot.tte_executions = report.tte_executions.value_or(0);
        if (!config.output_dir.empty()) {
          std::string path = (std::filesystem::path(config.output_dir) /
                              fmt::format("report_{}_{}_rep{:02}.json",
                                          bench.name, tag, job.rep))
                                 .string();
          WriteFile(path, report.ToJson(bench.program).dump(2) + "\n");
        }
      } catch (const std::exception& e) {
        slot.error = true;
        slot.error_message = e.what();
      }
      if (progress && *progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        (*progress)(fmt::format("[{}/{}] {} {} rep {} {}", index + 1,
                                jobs.size(), bench.name, tag, job.rep,
                                slot.error ? "error"
                                : slot.success
                                    ? fmt::format("tte={}",
                                                  slot.tte_executions)
                                    : "no-hit"));
      }
    }
  };

  uint32_t workers = std::max<uint32_t>(1, config.parallelism);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (uint32_t i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  if (!config.output_dir.empty()) {
    WriteFile((std::filesystem::path(config.output_dir) / "results.json")
                  .string(),
              result.ToJson().dump(2) + "\n");
    const std::string subject = tags.empty() ? "" : tags.front();
    WriteFile(
        (std::filesystem::path(config.output_dir) / "table.txt").string(),
        RenderTable(result, subject));
    WriteFile(
        (std::filesystem::path(config.output_dir) / "table.csv").string(),
        RenderCsv(result, subject));
  }
  return result;
}

namespace {

std::string MedianLabel(const MedianResult& m) {
  // '*' marks the 2x-budget penalty of an irreproducible cell.
  return m.reproducible ? fmt::format("{}", m.value)
                        : fmt::format("{}*", m.value);
}

std::vector<std::string> BaselineTags(const SuiteResult& results,
                                      const std::string& subject_tag) {
  std::vector<std::string> tags;
  if (results.cells.empty()) return tags;
  for (const auto& [tag, reps] : results.cells.begin()->second) {
    (void)reps;
    if (tag != subject_tag) tags.push_back(tag);
  }
  return tags;
}

}  // namespace

std::string RenderTable(const SuiteResult& results,
                        const std::string& subject_tag) {
  std::vector<std::string> baselines = BaselineTags(results, subject_tag);
  std::string out;
  out += fmt::format("{:<16} {:>16}", "benchmark", subject_tag);
  for (const std::string& tag : baselines) {
    out += fmt::format(" {:>16} {:>10}", tag, "ratio");
  }
  out += "\n";

  std::vector<Comparison> comparisons;
  for (const std::string& tag : baselines) {
    comparisons.push_back(Compare(results, tag, subject_tag));
  }

  size_t row_count = results.cells.size();
  for (size_t row = 0; row < row_count; ++row) {
    const std::string& bench =
        comparisons.empty()
            ? std::next(results.cells.begin(),
                        static_cast<ptrdiff_t>(row))->first
            : comparisons.front().rows[row].benchmark;
    MedianResult subject;
    if (!comparisons.empty()) {
      subject = comparisons.front().rows[row].subject;
    } else {
      auto it = std::next(results.cells.begin(), static_cast<ptrdiff_t>(row));
      std::vector<std::optional<uint64_t>> outcomes;
      for (const RepetitionResult& r : it->second.at(subject_tag)) {
        outcomes.emplace_back(r.success && !r.error
                                  ? std::optional<uint64_t>(r.tte_executions)
                                  : std::nullopt);
      }
      subject = MedianTte(outcomes, results.budget_executions);
    }
    out += fmt::format("{:<16} {:>16}", bench, MedianLabel(subject));
    for (const Comparison& cmp : comparisons) {
      const ComparisonRow& r = cmp.rows[row];
      out += fmt::format(" {:>16} {:>10.2f}", MedianLabel(r.baseline),
                         r.ratio);
    }
    out += "\n";
  }

  for (const Comparison& cmp : comparisons) {
    out += fmt::format(
        "vs {}: wins {}, losses {}, ties {}, avg ratio {:.2f}, "
        "sign-test p {:.4g}\n",
        cmp.baseline_tag, cmp.wins, cmp.losses, cmp.ties, cmp.average_ratio,
        cmp.p_value);
  }
  return out;
}

std::string RenderCsv(const SuiteResult& results,
                      const std::string& subject_tag) {
  std::vector<std::string> baselines = BaselineTags(results, subject_tag);
  std::string out =
      "benchmark,subject,subject_median,subject_reproducible,"
      "subject_successes,baseline,baseline_median,baseline_reproducible,"
      "baseline_successes,ratio,winner\n";
  for (const std::string& tag : baselines) {
    Comparison cmp = Compare(results, tag, subject_tag);
    for (const ComparisonRow& row : cmp.rows) {
      out += fmt::format(
          "{},{},{},{},{},{},{},{},{},{:.6g},{}\n", row.benchmark,
          subject_tag, row.subject.value, row.subject.reproducible ? 1 : 0,
          row.subject.successes, tag, row.baseline.value,
          row.baseline.reproducible ? 1 : 0, row.baseline.successes,
          row.ratio,
          row.winner > 0 ? "subject" : row.winner < 0 ? "baseline" : "tie");
    }
    out += fmt::format("(all),{},,,,{},,,,{:.6g},p={:.6g}\n", subject_tag,
                       tag, cmp.average_ratio, cmp.p_value);
  }
  return out;
}

}  // namespace stackfuzz
