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

#include "stackfuzz/loader.hpp"

#include <algorithm>
#include <filesystem>
#include <limits>

#include "stackfuzz/builtin.hpp"
#include "stackfuzz/util.hpp"

namespace stackfuzz {

namespace {

using nlohmann::json;

const json& Need(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw DocumentError(path + ": missing required key \"" + key + "\"");
  }
  return obj.at(key);
}

std::string NeedString(const json& obj, const char* key,
                       const std::string& path) {
  const json& v = Need(obj, key, path);
  if (!v.is_string()) {
    throw DocumentError(path + "/" + key + ": expected a string");
  }
  return v.get<std::string>();
}

int NeedLine(const json& obj, const std::string& path) {
  const json& v = Need(obj, "line", path);
  if (!v.is_number_integer() || v.get<int64_t>() <= 0 ||
      v.get<int64_t>() > std::numeric_limits<int>::max()) {
    throw DocumentError(path + "/line: expected a positive integer");
  }
  return static_cast<int>(v.get<int64_t>());
}

Location NeedLocationString(const json& v, const std::string& path) {
  if (!v.is_string()) {
    throw DocumentError(path + ": expected a \"file:line\" string");
  }
  auto loc = ParseLocation(v.get<std::string>());
  if (!loc) {
    throw DocumentError(path + ": not a valid \"file:line\": \"" +
                        v.get<std::string>() + "\"");
  }
  return *loc;
}

std::string RenderStatementText(const Statement& stmt,
                                const TargetProgram& program,
                                const VarTable& vars) {
  switch (stmt.kind) {
    case StatementKind::kAssign:
      return vars.Name(stmt.assign_slot) + " = " + stmt.expr.text + ";";
    case StatementKind::kCall: {
      std::string args;
      for (size_t i = 0; i < stmt.args.size(); ++i) {
        if (i) args += ", ";
        args += stmt.args[i].text;
      }
      return program.functions[stmt.callee].name + "(" + args + ");";
    }
    case StatementKind::kCrashIf:
      return "crash_if(" + stmt.expr.text + ");";
    case StatementKind::kNop:
      return ";";
  }
  return ";";
}

// Listing text for functions that ship none: their statement lines carry
// rendered statements, gaps stay blank. Good enough for slices to work.
void SynthesizeSource(Function& fn, const TargetProgram& program) {
  int lo = std::numeric_limits<int>::max();
  int hi = 0;
  for (const Block& b : fn.blocks) {
    for (const Statement& s : b.stmts) {
      int line = program.locations.Get(s.loc).line;
      lo = std::min(lo, line);
      hi = std::max(hi, line);
    }
  }
  if (hi == 0) {  // no statements at all
    fn.source.start = 1;
    fn.source.lines.clear();
    return;
  }
  fn.source.start = lo;
  fn.source.lines.assign(static_cast<size_t>(hi - lo + 1), "");
  for (const Block& b : fn.blocks) {
    for (const Statement& s : b.stmts) {
      int line = program.locations.Get(s.loc).line;
      fn.source.lines[static_cast<size_t>(line - lo)] =
          RenderStatementText(s, program, fn.vars);
    }
  }
}

}  // namespace

TargetProgram LoadProgram(const json& doc) {
  if (!doc.is_object()) throw DocumentError("document: expected an object");
  TargetProgram program;

  const json& functions = Need(doc, "functions", "document");
  if (!functions.is_object() || functions.empty()) {
    throw DocumentError("functions: expected a non-empty object");
  }

  // Pass one registers names so calls can resolve forward references.
  for (const auto& [name, body] : functions.items()) {
    (void)body;
    uint32_t index = static_cast<uint32_t>(program.functions.size());
    Function fn;
    fn.name = name;
    program.functions.push_back(std::move(fn));
    program.function_index.emplace(name, index);
  }

  std::string entry_name = NeedString(doc, "entry", "document");
  auto entry_it = program.function_index.find(entry_name);
  if (entry_it == program.function_index.end()) {
    throw DocumentError("entry: unknown function \"" + entry_name + "\"");
  }
  program.entry = entry_it->second;

  for (const auto& [name, body] : functions.items()) {
    Function& fn = program.functions[program.function_index.at(name)];
    const std::string path = "functions/" + name;
    fn.file = NeedString(body, "file", path);

    const json& params = Need(body, "params", path);
    if (!params.is_array()) {
      throw DocumentError(path + "/params: expected an array");
    }
    for (const json& p : params) {
      if (!p.is_string()) {
        throw DocumentError(path + "/params: expected strings");
      }
      fn.params.push_back(p.get<std::string>());
      fn.vars.Intern(p.get<std::string>());
    }
    if (fn.vars.size() != fn.params.size()) {
      throw DocumentError(path + "/params: duplicate parameter name");
    }

    const json& blocks = Need(body, "blocks", path);
    if (!blocks.is_array() || blocks.empty()) {
      throw DocumentError(path + "/blocks: expected a non-empty array");
    }
    std::map<std::string, uint32_t> block_index;
    for (const json& b : blocks) {
      std::string id = NeedString(b, "id", path + "/blocks");
      if (!block_index.emplace(id, static_cast<uint32_t>(block_index.size()))
               .second) {
        throw DocumentError(path + "/blocks: duplicate block id \"" + id +
                            "\"");
      }
      Block block;
      block.id = id;
      fn.blocks.push_back(std::move(block));
    }

    auto resolve_block = [&](const std::string& id,
                             const std::string& where) -> uint32_t {
      auto it = block_index.find(id);
      if (it == block_index.end()) {
        throw DocumentError(where + ": unknown block \"" + id + "\"");
      }
      return it->second;
    };

    for (size_t bi = 0; bi < blocks.size(); ++bi) {
      const json& bjson = blocks[bi];
      Block& block = fn.blocks[bi];
      const std::string bpath =
          path + "/blocks[" + std::to_string(bi) + "]";

      if (bjson.contains("stmts")) {
        const json& stmts = bjson.at("stmts");
        if (!stmts.is_array()) {
          throw DocumentError(bpath + "/stmts: expected an array");
        }
        for (size_t si = 0; si < stmts.size(); ++si) {
          const json& sjson = stmts[si];
          const std::string spath =
              bpath + "/stmts[" + std::to_string(si) + "]";
          Statement stmt;
          int line = NeedLine(sjson, spath);
          stmt.loc = program.locations.Intern(Location{fn.file, line});

          int forms = sjson.contains("assign") + sjson.contains("call") +
                      sjson.contains("crash_if") + sjson.contains("nop");
          if (forms != 1) {
            throw DocumentError(
                spath +
                ": expected exactly one of assign/call/crash_if/nop");
          }
          if (sjson.contains("assign")) {
            stmt.kind = StatementKind::kAssign;
            std::string var = NeedString(sjson, "assign", spath);
            stmt.assign_slot = fn.vars.Intern(var);
            stmt.expr = ParseExpr(NeedString(sjson, "expr", spath), fn.vars,
                                  spath + "/expr");
            stmt.uses = ExprUses(stmt.expr);
          } else if (sjson.contains("call")) {
            stmt.kind = StatementKind::kCall;
            std::string callee = NeedString(sjson, "call", spath);
            auto it = program.function_index.find(callee);
            if (it == program.function_index.end()) {
              throw DocumentError(spath + "/call: unknown function \"" +
                                  callee + "\"");
            }
            stmt.callee = it->second;
            if (sjson.contains("args")) {
              const json& args = sjson.at("args");
              if (!args.is_array()) {
                throw DocumentError(spath + "/args: expected an array");
              }
              for (size_t ai = 0; ai < args.size(); ++ai) {
                if (!args[ai].is_string()) {
                  throw DocumentError(spath + "/args: expected strings");
                }
                stmt.args.push_back(
                    ParseExpr(args[ai].get<std::string>(), fn.vars,
                              spath + "/args[" + std::to_string(ai) + "]"));
              }
            }
            const Function& callee_fn = program.functions[stmt.callee];
            (void)callee_fn;  // arity checked after all params are known
            std::vector<uint32_t> uses;
            for (const Expr& a : stmt.args) {
              for (uint32_t u : ExprUses(a)) uses.push_back(u);
            }
            std::sort(uses.begin(), uses.end());
            uses.erase(std::unique(uses.begin(), uses.end()), uses.end());
            stmt.uses = std::move(uses);
          } else if (sjson.contains("crash_if")) {
            stmt.kind = StatementKind::kCrashIf;
            stmt.expr = ParseExpr(NeedString(sjson, "crash_if", spath),
                                  fn.vars, spath + "/crash_if");
            stmt.uses = ExprUses(stmt.expr);
          } else {
            stmt.kind = StatementKind::kNop;
          }
          block.stmts.push_back(std::move(stmt));
        }
      }

      const json& term = Need(bjson, "term", bpath);
      if (term.is_string() && term.get<std::string>() == "return") {
        block.term.kind = Terminator::Kind::kReturn;
      } else if (term.is_object() && term.contains("goto")) {
        block.term.kind = Terminator::Kind::kGoto;
        if (!term.at("goto").is_string()) {
          throw DocumentError(bpath + "/term/goto: expected a block id");
        }
        block.term.to =
            resolve_block(term.at("goto").get<std::string>(), bpath + "/term");
      } else if (term.is_object() && term.contains("branch")) {
        const json& br = term.at("branch");
        block.term.kind = Terminator::Kind::kBranch;
        block.term.cond = ParseExpr(NeedString(br, "cond", bpath + "/term"),
                                    fn.vars, bpath + "/term/cond");
        block.term.then_block =
            resolve_block(NeedString(br, "then", bpath + "/term"),
                          bpath + "/term/then");
        block.term.else_block =
            resolve_block(NeedString(br, "else", bpath + "/term"),
                          bpath + "/term/else");
      } else {
        throw DocumentError(
            bpath + "/term: expected \"return\", {\"goto\":...} or "
                    "{\"branch\":...}");
      }
    }

    if (body.contains("entry_block")) {
      fn.entry_block = resolve_block(NeedString(body, "entry_block", path),
                                     path + "/entry_block");
    } else {
      fn.entry_block = 0;
    }

    if (body.contains("source")) {
      const json& source = body.at("source");
      const json& start = Need(source, "start", path + "/source");
      if (!start.is_number_integer() || start.get<int64_t>() <= 0) {
        throw DocumentError(path + "/source/start: expected a positive line");
      }
      fn.source.start = static_cast<int>(start.get<int64_t>());
      const json& lines = Need(source, "lines", path + "/source");
      if (!lines.is_array()) {
        throw DocumentError(path + "/source/lines: expected an array");
      }
      for (const json& l : lines) {
        if (!l.is_string()) {
          throw DocumentError(path + "/source/lines: expected strings");
        }
        fn.source.lines.push_back(l.get<std::string>());
      }
    }
  }

  // Call arity check now that every function's parameter list is final.
  for (const Function& fn : program.functions) {
    for (const Block& block : fn.blocks) {
      for (const Statement& stmt : block.stmts) {
        if (stmt.kind != StatementKind::kCall) continue;
        const Function& callee = program.functions[stmt.callee];
        if (stmt.args.size() != callee.params.size()) {
          throw DocumentError(
              "functions/" + fn.name + ": call to " + callee.name + " at " +
              FormatLocation(program.locations.Get(stmt.loc)) + " passes " +
              std::to_string(stmt.args.size()) + " args, expected " +
              std::to_string(callee.params.size()));
        }
      }
    }
  }

  for (Function& fn : program.functions) {
    if (fn.source.lines.empty() && fn.source.start == 0) {
      SynthesizeSource(fn, program);
    }
  }

  program.stmt_at.assign(program.locations.size(), StatementRef{});
  for (uint32_t fi = 0; fi < program.functions.size(); ++fi) {
    const Function& fn = program.functions[fi];
    for (uint32_t bi = 0; bi < fn.blocks.size(); ++bi) {
      for (uint32_t si = 0; si < fn.blocks[bi].stmts.size(); ++si) {
        program.stmt_at[fn.blocks[bi].stmts[si].loc] =
            StatementRef{fi, bi, si};
      }
    }
  }

  program.Validate();
  return program;
}

Benchmark LoadBenchmark(const json& doc, const std::string& name) {
  Benchmark bench;
  bench.name = name;
  bench.program = LoadProgram(doc);

  const json& targets = Need(doc, "targets", "document");
  if (!targets.is_array() || targets.empty()) {
    throw DocumentError("targets: expected a non-empty array");
  }
  for (size_t i = 0; i < targets.size(); ++i) {
    const std::string tpath = "targets[" + std::to_string(i) + "]";
    Location loc = NeedLocationString(targets[i], tpath);
    auto id = bench.program.FindLocation(loc);
    if (!id) {
      throw DocumentError(tpath + ": " + FormatLocation(loc) +
                          " is not a statement location in the program");
    }
    bench.targets.push_back(*id);
  }

  if (doc.contains("witness")) {
    const json& w = doc.at("witness");
    if (!w.is_string()) throw DocumentError("witness: expected a hex string");
    try {
      bench.witness = ParseHex(w.get<std::string>());
    } catch (const DocumentError& e) {
      throw DocumentError(std::string("witness: ") + e.what());
    }
  }

  if (doc.contains("vfg_edges")) {
    const json& edges = doc.at("vfg_edges");
    if (!edges.is_array()) {
      throw DocumentError("vfg_edges: expected an array of location pairs");
    }
    std::vector<std::pair<LocationId, LocationId>> out;
    for (size_t i = 0; i < edges.size(); ++i) {
      const std::string epath = "vfg_edges[" + std::to_string(i) + "]";
      const json& pair = edges[i];
      if (!pair.is_array() || pair.size() != 2) {
        throw DocumentError(epath + ": expected a [from, to] pair");
      }
      Location from = NeedLocationString(pair[0], epath + "[0]");
      Location to = NeedLocationString(pair[1], epath + "[1]");
      auto from_id = bench.program.FindLocation(from);
      auto to_id = bench.program.FindLocation(to);
      if (!from_id || !to_id) {
        throw DocumentError(epath + ": endpoint is not a statement location");
      }
      out.emplace_back(*from_id, *to_id);
    }
    bench.vfg_edges = std::move(out);
  }

  const json& seeds = Need(doc, "seeds", "document");
  if (!seeds.is_array() || seeds.empty()) {
    throw DocumentError("seeds: expected a non-empty array of hex strings");
  }
  for (size_t i = 0; i < seeds.size(); ++i) {
    if (!seeds[i].is_string()) {
      throw DocumentError("seeds[" + std::to_string(i) +
                          "]: expected a hex string");
    }
    try {
      bench.seeds.push_back(ParseHex(seeds[i].get<std::string>()));
    } catch (const DocumentError& e) {
      throw DocumentError("seeds[" + std::to_string(i) + "]: " + e.what());
    }
  }

  return bench;
}

Benchmark LoadBenchmarkFile(const std::string& path) {
  std::string text = ReadFile(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DocumentError(path + ": " + e.what());
  }
  return LoadBenchmark(doc, std::filesystem::path(path).stem().string());
}

Benchmark ResolveBenchmark(const std::string& name_or_path) {
  std::string name = name_or_path;
  if (name.rfind("builtin:", 0) == 0) name = name.substr(8);
  if (auto doc = BuiltinBenchmarkDocument(name)) {
    return LoadBenchmark(json::parse(*doc), name);
  }
  if (name_or_path.rfind("builtin:", 0) == 0) {
    throw DocumentError("unknown built-in benchmark \"" + name + "\"");
  }
  return LoadBenchmarkFile(name_or_path);
}

}  // namespace stackfuzz
