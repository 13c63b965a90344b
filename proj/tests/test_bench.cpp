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

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "stackfuzz/bench.hpp"
#include "stackfuzz/rng.hpp"
#include "stackfuzz/util.hpp"

namespace stackfuzz {
namespace {

namespace fs = std::filesystem;

RepetitionResult Hit(uint64_t tte) {
  RepetitionResult r;
  r.success = true;
  r.tte_executions = tte;
  return r;
}

RepetitionResult Miss() { return {}; }

// Success flag set but error raised: must count as a failure.
RepetitionResult Err() {
  RepetitionResult r;
  r.success = true;
  r.tte_executions = 5;
  r.error = true;
  r.error_message = "synthetic";
  return r;
}

// Independent sign-test oracle: Pascal's triangle in long double. Exact for
// n <= 63 because every partial sum stays below 2^63.
double SignTestOracle(uint64_t wins, uint64_t losses) {
  uint64_t n = wins + losses;
  if (n == 0) return 1.0;
  std::vector<long double> row{1.0L};
  for (uint64_t r = 1; r <= n; ++r) {
    std::vector<long double> next(r + 1, 1.0L);
    for (uint64_t k = 1; k < r; ++k) next[k] = row[k - 1] + row[k];
    row = std::move(next);
  }
  long double tail = 0;
  for (uint64_t k = wins; k <= n; ++k) tail += row[k];
  return static_cast<double>(tail / std::pow(2.0L, static_cast<int>(n)));
}

// Median oracle: sort the full run list with failures as +infinity and take
// the lower median, but a strict majority of finite outcomes (2s > n) is
// required; an even split already counts as irreproducible.
MedianResult MedianOracle(const std::vector<std::optional<uint64_t>>& outcomes,
                          uint64_t limit) {
  constexpr uint64_t kInf = std::numeric_limits<uint64_t>::max();
  std::vector<uint64_t> all;
  MedianResult m;
  for (const auto& o : outcomes) {
    all.push_back(o.value_or(kInf));
    if (o) ++m.successes;
  }
  std::sort(all.begin(), all.end());
  m.reproducible = 2 * uint64_t{m.successes} > all.size();
  m.value = m.reproducible ? all[(all.size() - 1) / 2] : 2 * limit;
  return m;
}

// Six benchmarks spanning every rung of the comparison ladder.
SuiteResult LadderResults() {
  SuiteResult results;
  results.repetitions = 4;
  results.budget_executions = 1000;
  const std::string S = "staczzer+oracle";
  const std::string B = "afl";
  auto& cells = results.cells;
  cells["p_fast"][S] = {Hit(10), Hit(20), Hit(30), Miss()};
  cells["p_fast"][B] = {Hit(40), Hit(50), Hit(60), Hit(70)};
  cells["q_only"][S] = {Hit(100), Hit(100), Hit(100), Hit(100)};
  cells["q_only"][B] = {Hit(5), Miss(), Miss(), Miss()};
  cells["r_neither"][S] = {Miss(), Hit(7), Miss(), Miss()};
  cells["r_neither"][B] = {Miss(), Miss(), Miss(), Miss()};
  cells["s_tie"][S] = {Hit(500), Hit(500), Hit(500), Hit(500)};
  cells["s_tie"][B] = {Hit(500), Hit(500), Hit(500), Hit(500)};
  cells["t_slow"][S] = {Hit(800), Hit(800), Hit(800), Hit(800)};
  cells["t_slow"][B] = {Hit(400), Hit(400), Hit(400), Hit(400)};
  cells["u_err"][S] = {Err(), Err(), Hit(9), Hit(9)};
  cells["u_err"][B] = {Hit(100), Hit(100), Hit(100), Miss()};
  return results;
}

TEST_SUITE("bench") {

TEST_CASE("combo tags parse and print both ways") {
  struct Row {
    const char* tag;
    Metric metric;
    std::optional<PredictorStrategy> predictor;
  };
  const Row rows[] = {
      {"staczzer+oracle", Metric::kStackOverlap, PredictorStrategy::kOracle},
      {"staczzer+ablation", Metric::kStackOverlap,
       PredictorStrategy::kAblation},
      {"staczzer+llm", Metric::kStackOverlap, PredictorStrategy::kLlm},
      {"staczzer+mock", Metric::kStackOverlap, PredictorStrategy::kMock},
      {"aflgo", Metric::kCfgHarmonic, std::nullopt},
      {"windranger", Metric::kDbbMean, std::nullopt},
      {"dafl", Metric::kVfgReward, std::nullopt},
      {"afl", Metric::kUniform, std::nullopt},
  };
  for (const Row& row : rows) {
    CAPTURE(row.tag);
    auto combo = ParseComboTag(row.tag);
    REQUIRE(combo.has_value());
    CHECK(combo->metric == row.metric);
    CHECK(combo->predictor == row.predictor);
    CHECK(combo->Tag() == row.tag);
  }
  CHECK_FALSE(ParseComboTag("bogus").has_value());
  CHECK_FALSE(ParseComboTag("staczzer+bogus").has_value());
  CHECK_FALSE(ParseComboTag("").has_value());
}

TEST_CASE("median needs a strict majority of successes") {
  // 40 runs: 19 and 20 successes stay irreproducible, 21 flips it.
  auto runs_of = [](uint32_t hits, uint32_t total) {
    std::vector<std::optional<uint64_t>> outcomes;
    for (uint32_t i = 0; i < total; ++i) {
      if (i < hits) outcomes.emplace_back(i + 1);
      else outcomes.emplace_back(std::nullopt);
    }
    return outcomes;
  };

  MedianResult nineteen = MedianTte(runs_of(19, 40), 1000);
  CHECK_FALSE(nineteen.reproducible);
  CHECK(nineteen.value == 2000);
  CHECK(nineteen.successes == 19);

  MedianResult twenty = MedianTte(runs_of(20, 40), 1000);
  CHECK_FALSE(twenty.reproducible);
  CHECK(twenty.value == 2000);

  MedianResult twentyone = MedianTte(runs_of(21, 40), 1000);
  CHECK(twentyone.reproducible);
  CHECK(twentyone.value == 20);  // lower median: slot 19 of 1..21 + 19 misses
  CHECK(twentyone.successes == 21);
}

TEST_CASE("median picks the lower middle and penalizes total failure") {
  MedianResult m = MedianTte({{1}, {2}, {3}, std::nullopt}, 10);
  CHECK(m.reproducible);
  CHECK(m.value == 2);
  CHECK(m.successes == 3);

  MedianResult lone = MedianTte({{5}}, 10);
  CHECK(lone.reproducible);
  CHECK(lone.value == 5);

  MedianResult dead = MedianTte(
      {std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt},
      7);
  CHECK_FALSE(dead.reproducible);
  CHECK(dead.value == 14);
  CHECK(dead.successes == 0);

  MedianResult empty = MedianTte({}, 9);
  CHECK_FALSE(empty.reproducible);
  CHECK(empty.value == 18);
}

TEST_CASE("median equals the sort-with-infinities oracle on random runs") {
  Rng rng(404);
  for (int trial = 0; trial < 300; ++trial) {
    size_t n = rng.Below(12);
    std::vector<std::optional<uint64_t>> outcomes;
    for (size_t i = 0; i < n; ++i) {
      if (rng.Chance(1, 2)) outcomes.emplace_back(rng.Below(500));
      else outcomes.emplace_back(std::nullopt);
    }
    uint64_t limit = 1 + rng.Below(1000);
    MedianResult got = MedianTte(outcomes, limit);
    MedianResult want = MedianOracle(outcomes, limit);
    CHECK(got.reproducible == want.reproducible);
    CHECK(got.value == want.value);
    CHECK(got.successes == want.successes);
  }
}

TEST_CASE("sign test reproduces the exact binomial tails") {
  CHECK(SignTest(31, 4) == 1.7327256500720978e-06);
  CHECK(SignTest(30, 4) == 3.08244489133358e-06);
  CHECK(SignTest(24, 12) == 0.032622667611576617);
  CHECK(SignTest(23, 12) == 0.044765539467334747);
  CHECK(SignTest(1, 0) == 0.5);
  CHECK(SignTest(12, 0) == 0.000244140625);  // 2^-12
  CHECK(SignTest(10, 2) == 0.019287109375);
  CHECK(SignTest(0, 0) == 1.0);
  CHECK(SignTest(0, 9) == 1.0);  // P[X >= 0] is certain
}

TEST_CASE("sign test matches an independent Pascal triangle oracle") {
  for (uint64_t wins = 0; wins <= 24; ++wins) {
    for (uint64_t losses = 0; losses + wins <= 24; ++losses) {
      CAPTURE(wins);
      CAPTURE(losses);
      CHECK(SignTest(wins, losses) ==
            doctest::Approx(SignTestOracle(wins, losses)).epsilon(1e-15));
    }
  }
}

TEST_CASE("comparison walks the ladder: medians, counts, penalty ratios") {
  SuiteResult results = LadderResults();
  Comparison cmp = Compare(results, "afl", "staczzer+oracle");
  CHECK(cmp.baseline_tag == "afl");
  CHECK(cmp.subject_tag == "staczzer+oracle");
  REQUIRE(cmp.rows.size() == 6);

  // Rows come back in benchmark name order.
  CHECK(cmp.rows[0].benchmark == "p_fast");
  CHECK(cmp.rows[0].winner == 1);  // 20 beats 50
  CHECK(cmp.rows[0].subject.value == 20);
  CHECK(cmp.rows[0].baseline.value == 50);
  CHECK(cmp.rows[0].ratio == 2.5);

  CHECK(cmp.rows[1].benchmark == "q_only");
  CHECK(cmp.rows[1].winner == 1);  // reproducible beats irreproducible
  CHECK_FALSE(cmp.rows[1].baseline.reproducible);
  CHECK(cmp.rows[1].baseline.value == 2000);
  CHECK(cmp.rows[1].ratio == 20.0);

  CHECK(cmp.rows[2].benchmark == "r_neither");
  CHECK(cmp.rows[2].winner == 1);  // one success beats none
  CHECK(cmp.rows[2].ratio == 1.0);  // both penalized at 2000

  CHECK(cmp.rows[3].benchmark == "s_tie");
  CHECK(cmp.rows[3].winner == 0);

  CHECK(cmp.rows[4].benchmark == "t_slow");
  CHECK(cmp.rows[4].winner == -1);
  CHECK(cmp.rows[4].ratio == 0.5);

  CHECK(cmp.rows[5].benchmark == "u_err");
  CHECK(cmp.rows[5].winner == -1);  // errors turn successes into failures
  CHECK(cmp.rows[5].subject.successes == 2);
  CHECK_FALSE(cmp.rows[5].subject.reproducible);

  CHECK(cmp.wins == 3);
  CHECK(cmp.losses == 2);
  CHECK(cmp.ties == 1);
  CHECK(cmp.p_value == SignTest(3, 2));
  double expected_avg = (2.5 + 20.0 + 1.0 + 1.0 + 0.5 + 0.05) / 6.0;
  CHECK(cmp.average_ratio == doctest::Approx(expected_avg).epsilon(1e-12));
}

TEST_CASE("comparison is antisymmetric and demands both tags") {
  SuiteResult results = LadderResults();
  Comparison fwd = Compare(results, "afl", "staczzer+oracle");
  Comparison rev = Compare(results, "staczzer+oracle", "afl");
  CHECK(rev.wins == fwd.losses);
  CHECK(rev.losses == fwd.wins);
  CHECK(rev.ties == fwd.ties);
  for (size_t i = 0; i < fwd.rows.size(); ++i) {
    CHECK(rev.rows[i].winner == -fwd.rows[i].winner);
  }
  CHECK_THROWS_AS(Compare(results, "afl", "windranger"),
                  std::invalid_argument);
  CHECK_THROWS_AS(Compare(results, "dafl", "staczzer+oracle"),
                  std::invalid_argument);
}

TEST_CASE("a four fold speedup reads as ratio four") {
  SuiteResult results;
  results.repetitions = 1;
  results.budget_executions = 200000;
  results.cells["only"]["staczzer+oracle"] = {Hit(500)};
  results.cells["only"]["afl"] = {Hit(2628)};
  Comparison cmp = Compare(results, "afl", "staczzer+oracle");
  CHECK(cmp.rows[0].ratio == 5.256);
  CHECK(cmp.average_ratio == 5.256);
}

TEST_CASE("suite configs parse from json with layered defaults") {
  nlohmann::json doc = nlohmann::json::parse(R"({
    "benchmarks": ["cxxfilt_toy", "some/path.json"],
    "configs": ["staczzer+oracle", "aflgo", "afl"],
    "repetitions": 5,
    "budget_executions": 1234,
    "step_limit": 999,
    "max_input_len": 64,
    "parallelism": 3,
    "output_dir": "out",
    "llm": {"endpoint_url": "http://h/v1", "model_name": "m",
            "api_key_env": "KEY", "temperature": 0.5,
            "max_tokens": 128, "max_retries": 7}
  })");
  SuiteConfig config = SuiteConfig::FromJson(doc);
  CHECK(config.benchmarks ==
        std::vector<std::string>{"cxxfilt_toy", "some/path.json"});
  REQUIRE(config.configs.size() == 3);
  CHECK(config.configs[0].Tag() == "staczzer+oracle");
  CHECK(config.configs[1].Tag() == "aflgo");
  CHECK(config.configs[2].Tag() == "afl");
  CHECK(config.repetitions == 5);
  CHECK(config.budget_executions == 1234);
  CHECK(config.step_limit == 999);
  CHECK(config.max_input_len == 64);
  CHECK(config.parallelism == 3);
  CHECK(config.output_dir == "out");
  CHECK(config.llm.endpoint_url == "http://h/v1");
  CHECK(config.llm.model_name == "m");
  CHECK(config.llm.api_key_env == "KEY");
  CHECK(config.llm.temperature == 0.5);
  CHECK(config.llm.max_tokens == 128);
  CHECK(config.llm.max_retries == 7);

  SuiteConfig defaults = SuiteConfig::FromJson(nlohmann::json::parse(
      R"({"benchmarks": ["cxxfilt_toy"], "configs": ["afl"]})"));
  CHECK(defaults.repetitions == 20);
  CHECK(defaults.budget_executions == 200000);
  CHECK(defaults.parallelism == 1);
  CHECK(defaults.output_dir.empty());
}

TEST_CASE("suite config rejections name the offending field") {
  using nlohmann::json;
  auto parse = [](const char* text) {
    return SuiteConfig::FromJson(json::parse(text));
  };
  CHECK_THROWS_WITH_AS(parse("[]"), "suite: expected an object",
                       DocumentError);
  CHECK_THROWS_WITH_AS(parse(R"({"configs": ["afl"]})"),
                       "suite/benchmarks: expected a non-empty array",
                       DocumentError);
  CHECK_THROWS_WITH_AS(parse(R"({"benchmarks": [], "configs": ["afl"]})"),
                       "suite/benchmarks: expected a non-empty array",
                       DocumentError);
  CHECK_THROWS_WITH_AS(parse(R"({"benchmarks": [3], "configs": ["afl"]})"),
                       "suite/benchmarks: expected strings", DocumentError);
  CHECK_THROWS_WITH_AS(parse(R"({"benchmarks": ["x"]})"),
                       "suite/configs: expected a non-empty array",
                       DocumentError);
  CHECK_THROWS_WITH_AS(
      parse(R"({"benchmarks": ["x"], "configs": ["bogus"]})"),
      "suite/configs: unknown configuration tag \"bogus\"", DocumentError);
  CHECK_THROWS_WITH_AS(
      parse(R"({"benchmarks": ["x"], "configs": ["afl"],
                "repetitions": -3})"),
      "suite/repetitions: expected a non-negative integer", DocumentError);
  CHECK_THROWS_WITH_AS(
      parse(R"({"benchmarks": ["x"], "configs": ["afl"],
                "repetitions": 0})"),
      "suite/repetitions: must be at least 1", DocumentError);
  CHECK_THROWS_WITH_AS(
      parse(R"({"benchmarks": ["x"], "configs": ["afl"], "llm": 3})"),
      "suite/llm: expected an object", DocumentError);
  CHECK_THROWS_WITH_AS(
      parse(R"({"benchmarks": ["x"], "configs": ["afl"],
                "llm": {"endpoint_url": 9}})"),
      "suite/llm/endpoint_url: expected a string", DocumentError);
}

TEST_CASE("suite results round trip through their versioned document") {
  SuiteResult results = LadderResults();
  nlohmann::json doc = results.ToJson();
  CHECK(doc["version"] == 1);
  CHECK(doc["repetitions"] == 4);
  CHECK(doc["budget_executions"] == 1000);
  SuiteResult back = SuiteResult::FromJson(doc);
  CHECK(back.ToJson() == doc);
  CHECK(back.cells.size() == results.cells.size());
  CHECK(back.cells["u_err"]["staczzer+oracle"][0].error);
  CHECK(back.cells["u_err"]["staczzer+oracle"][0].error_message ==
        "synthetic");

  nlohmann::json wrong = doc;
  wrong["version"] = 2;
  CHECK_THROWS_WITH_AS(SuiteResult::FromJson(wrong),
                       "results: unsupported document version",
                       DocumentError);
}

TEST_CASE("a small live suite is reproducible and writes its artifacts") {
  const std::string dir = "bench_suite_unit";
  fs::remove_all(dir);

  SuiteConfig config;
  config.benchmarks = {"cxxfilt_toy"};
  config.configs = {*ParseComboTag("staczzer+oracle"), *ParseComboTag("afl")};
  config.repetitions = 2;
  config.budget_executions = 30000;
  config.step_limit = 10000;
  config.output_dir = dir;

  SuiteResult first = RunSuite(config);
  CHECK(first.repetitions == 2);
  REQUIRE(first.cells.count("cxxfilt_toy") == 1);
  REQUIRE(first.cells["cxxfilt_toy"].count("staczzer+oracle") == 1);
  REQUIRE(first.cells["cxxfilt_toy"].count("afl") == 1);
  CHECK(first.cells["cxxfilt_toy"]["staczzer+oracle"].size() == 2);

  // Reruns reproduce the numbers exactly: seeds hash (bench, tag, rep).
  SuiteConfig quiet = config;
  quiet.output_dir.clear();
  SuiteResult second = RunSuite(quiet);
  CHECK(second.ToJson() == first.ToJson());

  for (const char* tag : {"staczzer+oracle", "afl"}) {
    for (int rep = 0; rep < 2; ++rep) {
      fs::path report =
          fs::path(dir) /
          fmt::format("report_cxxfilt_toy_{}_rep{:02}.json", tag, rep);
      CAPTURE(report.string());
      REQUIRE(fs::exists(report));
      nlohmann::json doc = nlohmann::json::parse(ReadFile(report.string()));
      CHECK(doc["benchmark"] == "cxxfilt_toy");
      CHECK(doc["rng_seed"] ==
            Fnv1a64(std::string("cxxfilt_toy") + "\x1f" + tag + "\x1f" +
                    std::to_string(rep)));
      CHECK(doc["max_executions"] == 30000);
    }
  }

  nlohmann::json results_doc =
      nlohmann::json::parse(ReadFile((fs::path(dir) / "results.json").string()));
  CHECK(results_doc == first.ToJson());

  std::string table = ReadFile((fs::path(dir) / "table.txt").string());
  CHECK(table == RenderTable(first, "staczzer+oracle"));
  std::string csv = ReadFile((fs::path(dir) / "table.csv").string());
  CHECK(csv == RenderCsv(first, "staczzer+oracle"));

  fs::remove_all(dir);
}

TEST_CASE("rendered tables carry penalties, footers and the csv summary") {
  SuiteResult results = LadderResults();
  std::string table = RenderTable(results, "staczzer+oracle");
  CHECK(table.rfind("benchmark", 0) == 0);
  CHECK(table.find("p_fast") != std::string::npos);
  CHECK(table.find("2000*") != std::string::npos);  // penalty marker

  Comparison cmp = Compare(results, "afl", "staczzer+oracle");
  std::string footer = fmt::format(
      "vs afl: wins {}, losses {}, ties {}, avg ratio {:.2f}, "
      "sign-test p {:.4g}\n",
      cmp.wins, cmp.losses, cmp.ties, cmp.average_ratio, cmp.p_value);
  CHECK(table.find(footer) != std::string::npos);
  CHECK(table.find("sign-test p 0.5") != std::string::npos);

  std::string csv = RenderCsv(results, "staczzer+oracle");
  CHECK(csv.rfind("benchmark,subject,", 0) == 0);
  CHECK(csv.find("\n(all),staczzer+oracle,") != std::string::npos);
  CHECK(csv.find("p=0.5") != std::string::npos);
  CHECK(csv.find("u_err,staczzer+oracle,2000,0,2,afl,100,1,3,0.05,baseline") !=
        std::string::npos);
}

}  // TEST_SUITE

}  // namespace
}  // namespace stackfuzz
