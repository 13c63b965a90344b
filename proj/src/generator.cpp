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

#include "stackfuzz/generator.hpp"

#include <filesystem>
#include <vector>

#include <fmt/format.h>

#include "stackfuzz/rng.hpp"
#include "stackfuzz/util.hpp"

namespace stackfuzz {

namespace {

using nlohmann::json;

json Nop(int line) { return {{"line", line}, {"nop", true}}; }

json Assign(int line, const std::string& var, const std::string& expr) {
  return {{"line", line}, {"assign", var}, {"expr", expr}};
}

json Call(int line, const std::string& callee,
          const std::vector<std::string>& args) {
  return {{"line", line}, {"call", callee}, {"args", args}};
}

json Branch(const std::string& cond, const std::string& then_block,
            const std::string& else_block) {
  return {{"branch",
           {{"cond", cond}, {"then", then_block}, {"else", else_block}}}};
}

json Goto(const std::string& to) { return {{"goto", to}}; }

}  // namespace

json GenerateBenchmarkDocument(const GeneratorConfig& config, uint32_t index) {
  Rng rng(config.seed + 0x9E3779B97F4A7C15ULL * (uint64_t{index} + 1));

  int span = config.max_depth >= config.min_depth
                 ? config.max_depth - config.min_depth + 1
                 : 1;
  int d = config.min_depth + static_cast<int>(index % span);
  int k = config.decoy_branches;
  const std::string file = fmt::format("prog{}.c", index);

  // Mode byte routes to the gated chain; every gate is an exact byte match.
  uint8_t mode = static_cast<uint8_t>(1 + rng.Below(255));
  std::vector<uint8_t> gates;
  for (int j = 1; j < d; ++j) {
    gates.push_back(static_cast<uint8_t>(0x21 + rng.Below(94)));
  }

  json functions = json::object();

  // Entry: lines 1..4.
  {
    json m0_stmts = json::array(
        {Assign(1, "pos", "1"), Assign(2, "mode", "in[0]")});
    json blocks = json::array();
    blocks.push_back({{"id", "m0"},
                      {"stmts", m0_stmts},
                      {"term", Branch(fmt::format("mode == {}", mode),
                                      "m_chain", "m_decoy")}});
    blocks.push_back({{"id", "m_chain"},
                      {"stmts", json::array({Call(
                                    3, d > 1 ? "step1" : "parse_len",
                                    {"pos"})})},
                      {"term", "return"}});
    blocks.push_back(
        {{"id", "m_decoy"},
         {"stmts", json::array({Call(4, "decoy_scan", {"pos"})})},
         {"term", "return"}});
    functions["main"] = {
        {"file", file}, {"params", json::array()}, {"blocks", blocks}};
  }

  // Chain links: lines 100j+1..100j+4 for link j.
  for (int j = 1; j < d; ++j) {
    int base = 100 * j;
    std::string next = j + 1 < d ? fmt::format("step{}", j + 1) : "parse_len";
    json blocks = json::array();
    blocks.push_back(
        {{"id", "q0"},
         {"stmts", json::array({Nop(base + 1)})},
         {"term", Branch(fmt::format("in[pos] == {}", gates[j - 1]), "q1",
                         "q_cold")}});
    blocks.push_back({{"id", "q1"},
                      {"stmts", json::array({Assign(base + 2, "pos", "pos + 1"),
                                             Call(base + 3, next, {"pos"})})},
                      {"term", "return"}});
    blocks.push_back({{"id", "q_cold"},
                      {"term", Branch("0 != 0", "q_dead", "q_exit")}});
    blocks.push_back({{"id", "q_dead"},
                      {"stmts", json::array({Nop(base + 4)})},
                      {"term", Goto("q_exit")}});
    blocks.push_back({{"id", "q_exit"}, {"term", "return"}});
    functions[fmt::format("step{}", j)] = {
        {"file", file}, {"params", {"pos"}}, {"blocks", blocks}};
  }

  // The crashing parser: lines 100d+1..100d+8, target at 100d+7. A digit run
  // is folded into n, which the final check rejects past the capacity.
  int pbase = 100 * d;
  {
    json blocks = json::array();
    blocks.push_back({{"id", "p0"},
                      {"stmts", json::array({Nop(pbase + 1)})},
                      {"term", Branch("is_digit(in[pos])", "p1", "p_cold")}});
    blocks.push_back({{"id", "p1"},
                      {"stmts", json::array({Assign(pbase + 2, "n", "0")})},
                      {"term", Goto("p2")}});
    blocks.push_back({{"id", "p2"},
                      {"stmts", json::array({Nop(pbase + 3)})},
                      {"term", Branch("is_digit(in[pos])", "p3", "p4")}});
    blocks.push_back(
        {{"id", "p3"},
         {"stmts",
          json::array({Assign(pbase + 4, "n", "n * 10"),
                       Assign(pbase + 5, "n", "n + (in[pos] - '0')"),
                       Assign(pbase + 6, "pos", "pos + 1")})},
         {"term", Goto("p2")}});
    blocks.push_back(
        {{"id", "p4"},
         {"stmts", json::array({json{{"line", pbase + 7},
                                     {"crash_if", "n > 30 || n < 0"}}})},
         {"term", "return"}});
    blocks.push_back({{"id", "p_cold"},
                      {"term", Branch("0 != 0", "p_dead", "p_exit")}});
    blocks.push_back({{"id", "p_dead"},
                      {"stmts", json::array({Nop(pbase + 8)})},
                      {"term", Goto("p_exit")}});
    blocks.push_back({{"id", "p_exit"}, {"term", "return"}});
    functions["parse_len"] = {
        {"file", file}, {"params", {"pos"}}, {"blocks", blocks}};
  }

  // Decoy: k independent diamonds over in[pos+j]. Mutants of the decoy seed
  // keep minting fresh trace sets, which is exactly the corpus pollution an
  // undirected scheduler drowns in.
  {
    int base = 100 * (d + 1);
    json blocks = json::array();
    for (int j = 0; j < k; ++j) {
      std::string here = fmt::format("d{}", j);
      std::string next = j + 1 < k ? fmt::format("d{}", j + 1) : "d_tail";
      blocks.push_back(
          {{"id", here},
           {"stmts", json::array({Nop(base + 3 * j + 1)})},
           {"term", Branch(fmt::format("in[pos + {}] < 128", j),
                           here + "t", here + "e")}});
      blocks.push_back({{"id", here + "t"},
                        {"stmts", json::array({Nop(base + 3 * j + 2)})},
                        {"term", Goto(next)}});
      blocks.push_back({{"id", here + "e"},
                        {"stmts", json::array({Nop(base + 3 * j + 3)})},
                        {"term", Goto(next)}});
    }
    blocks.push_back({{"id", "d_tail"},
                      {"stmts", json::array({Nop(base + 3 * k + 1)})},
                      {"term", "return"}});
    functions["decoy_scan"] = {
        {"file", file}, {"params", {"pos"}}, {"blocks", blocks}};
  }

  std::vector<uint8_t> witness{mode};
  witness.insert(witness.end(), gates.begin(), gates.end());
  witness.insert(witness.end(), {'9', '9', '9'});

  std::vector<uint8_t> chain_seed{mode};
  chain_seed.insert(chain_seed.end(), gates.begin(), gates.end());
  chain_seed.insert(chain_seed.end(), {'x', 'y'});

  std::vector<uint8_t> decoy_seed{static_cast<uint8_t>(mode ^ 0xFF)};
  for (int j = 0; j < k; ++j) decoy_seed.push_back(rng.Byte());

  json doc;
  doc["entry"] = "main";
  doc["functions"] = functions;
  doc["targets"] = {fmt::format("{}:{}", file, pbase + 7)};
  doc["witness"] = FormatHex(witness);
  doc["seeds"] = {FormatHex(chain_seed), FormatHex(decoy_seed)};
  return doc;
}

std::string GenerateSuite(const std::string& dir, uint32_t count,
                          const GeneratorConfig& config) {
  std::filesystem::create_directories(dir);
  json benchmarks = json::array();
  for (uint32_t i = 0; i < count; ++i) {
    json doc = GenerateBenchmarkDocument(config, i);
    std::string path =
        (std::filesystem::path(dir) / fmt::format("gen_{:02}.json", i))
            .string();
    WriteFile(path, doc.dump(2) + "\n");
    benchmarks.push_back(path);
  }
  json suite;
  suite["benchmarks"] = benchmarks;
  suite["configs"] = {"staczzer+oracle", "afl"};
  suite["repetitions"] = 20;
  suite["budget_executions"] = 200000;
  suite["parallelism"] = 1;
  std::string suite_path =
      (std::filesystem::path(dir) / "suite.json").string();
  WriteFile(suite_path, suite.dump(2) + "\n");
  return suite_path;
}

}  // namespace stackfuzz
