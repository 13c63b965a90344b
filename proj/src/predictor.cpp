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

#include "stackfuzz/predictor.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "stackfuzz/executor.hpp"

namespace stackfuzz {

namespace {

constexpr char kSystemMessage[] =
    "You are a fuzzing expert, well-versed in the operation logic of AFL and "
    "its extension tools. You have a deep understanding of bugs inherent in "
    "the code.";

// The task framing. <TARGET>, <FUNCTION> and <CODE> are substituted;
// <FUNCTION> appears twice.
constexpr char kUserTemplate[] =
    R"(You are given a codebase and a specific target line known to contain or trigger a bug, located at <TARGET> in the function <FUNCTION>. The provided code slice is <CODE>.

Output the possible call stack that would directly trigger the crash (that is, if there were a sanitizer report) based on your code understanding and static reasoning.

In the code slices, before the start of each function, ===== file:function ===== is used for indication. Each line of relevant call site is annotated with its line number in the comments. You must strictly output each call site in the file:line format.

For example, the following is a real AddressSanitizer (ASan) stack trace:

ERROR: AddressSanitizer: stack-buffer-overflow on address 0x7ffe16573d50 at pc 0x000000549e9e bp 0x7ffe16572b90 sp 0x7ffe16572b88
WRITE of size 1 at 0x7ffe16573d50 thread T0
    #0 0x549e9d in postprocess_termcap /root/ncurses/tinfo/parse_entry.c:1000:7
    #1 0x543767 in _nc_parse_entry /root/ncurses/tinfo/parse_entry.c:643:6
    #2 0x538e21 in _nc_read_entry_source /root/ncurses/tinfo/comp_parse.c:238:6
    #3 0x4c5c4f in main /root/progs/../progs/tic.c:985:5

In your output, only include functions that would actually appear in the final sanitizer stack trace. These must be the frames present on the stack at the moment of crash.
Do not include any function that has already returned (i.e., no longer present in the stack at the time of the crash), such as helpers or functions that were called and exited prior to the crash point.

For example, if _nc_parse_entry calls a helper function helper at parse_entry.c:700 and then helper returns, parse_entry.c:700 must not appear in this list. This is a critical selection criterion.
The output should represent a single, continuous, unbroken call site chain from the innermost frame (<FUNCTION>) to the call site of the main function, as would appear in a real ASan stack trace, with no extra frames.
Do not omit any function in the call stack.
Please do not output any of your thinking process, only output the final result.
You must strictly follow the format below: each function should be on a separate line. Do not output any additional information.

The output must not include any function that has already returned prior to the crash. Your output should strictly match what would appear in a real sanitizer stack trace, including all functions, and only those functions, that are still present on the call stack at the moment of the crash, in the correct order.
Do not omit any function from the call stack.
For clarity, see the following examples:

[Wrong Example 1]
parse_entry.c:1000
parse_entry.c:700   # <- Error: This function has already returned and MUST NOT appear here
parse_entry.c:643
comp_parse.c:238
tic.c:985

[Wrong Example 2]
parse_entry.c:1000   # <- Error: Missing the call-site in the function _nc_parse_entry
comp_parse.c:238
tic.c:985

[Correct Example]
parse_entry.c:1000
parse_entry.c:643
comp_parse.c:238
tic.c:985
)";

void ReplaceAll(std::string& text, const std::string& from,
                const std::string& to) {
  for (size_t pos = text.find(from); pos != std::string::npos;
       pos = text.find(from, pos + to.size())) {
    text.replace(pos, from.size(), to);
  }
}

std::string Trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string PredictorTag(PredictorStrategy s) {
  switch (s) {
    case PredictorStrategy::kOracle: return "oracle";
    case PredictorStrategy::kAblation: return "ablation";
    case PredictorStrategy::kLlm: return "llm";
    case PredictorStrategy::kMock: return "mock";
  }
  return "ablation";
}

std::optional<PredictorStrategy> ParsePredictorTag(const std::string& tag) {
  if (tag == "oracle") return PredictorStrategy::kOracle;
  if (tag == "ablation") return PredictorStrategy::kAblation;
  if (tag == "llm") return PredictorStrategy::kLlm;
  if (tag == "mock") return PredictorStrategy::kMock;
  return std::nullopt;
}

PredictedStack MakePredictedStack(std::vector<LocationId> frames) {
  PredictedStack stack;
  stack.as_set = frames;
  std::sort(stack.as_set.begin(), stack.as_set.end());
  stack.as_set.erase(std::unique(stack.as_set.begin(), stack.as_set.end()),
                     stack.as_set.end());
  stack.frames = std::move(frames);
  return stack;
}

std::string PromptSystemMessage() { return kSystemMessage; }

std::string PromptUserMessage(const CodeSlice& slice, const Location& target,
                              const std::string& target_function) {
  std::string text = kUserTemplate;
  ReplaceAll(text, "<TARGET>", FormatLocation(target));
  ReplaceAll(text, "<FUNCTION>", target_function);
  ReplaceAll(text, "<CODE>", slice.text);
  return text;
}

std::string BuildPrompt(const CodeSlice& slice, const Location& target,
                        const std::string& target_function) {
  return PromptSystemMessage() + "\n\n" +
         PromptUserMessage(slice, target, target_function);
}

PredictedStack ParseResponse(const std::string& raw,
                             const TargetProgram& program, const CallGraph& cg,
                             std::span<const uint32_t> reachable,
                             LocationId target,
                             std::vector<std::string>* warnings) {
  std::set<uint32_t> in_slice(reachable.begin(), reachable.end());
  std::set<LocationId> known{target};
  for (const CallEdge& e : cg.edges) {
    if (in_slice.count(e.caller) && in_slice.count(e.callee)) {
      known.insert(e.site);
    }
  }
  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };

  std::vector<LocationId> frames;
  size_t start = 0;
  while (start <= raw.size()) {
    size_t end = raw.find('\n', start);
    std::string line = raw.substr(
        start, end == std::string::npos ? std::string::npos : end - start);
    start = end == std::string::npos ? raw.size() + 1 : end + 1;

    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;

    auto loc = ParseLocation(line);
    if (!loc) {
      warn("dropped line, not file:line shaped: \"" + line + "\"");
      continue;
    }
    auto id = program.FindLocation(*loc);
    if (!id || !known.count(*id)) {
      warn("dropped unknown call site: " + FormatLocation(*loc));
      continue;
    }
    frames.push_back(*id);
  }

  if (frames.empty() || frames.front() != target) {
    warn("innermost frame missing, prepending the target " +
         FormatLocation(program.locations.Get(target)));
    frames.insert(frames.begin(), target);
  }

  // One unbroken chain: each outer frame is a call site whose callee is the
  // function holding the frame inside it, and the outermost frame sits in
  // the entry function.
  for (size_t i = 1; i < frames.size(); ++i) {
    uint32_t inner_fn = program.stmt_at[frames[i]].function;
    (void)inner_fn;
    auto it = cg.site_edge.find(frames[i]);
    if (it == cg.site_edge.end()) {
      throw PredictionInvalidError(
          "frame " + std::to_string(i) + " (" +
              FormatLocation(program.locations.Get(frames[i])) +
              ") is not a call site",
          raw);
    }
    const CallEdge& edge = cg.edges[it->second];
    uint32_t callee_needed = program.stmt_at[frames[i - 1]].function;
    if (edge.callee != callee_needed) {
      throw PredictionInvalidError(
          "broken chain at frame " + std::to_string(i) + ": " +
              FormatLocation(program.locations.Get(frames[i])) +
              " does not call " + program.functions[callee_needed].name,
          raw);
    }
  }
  if (program.stmt_at[frames.back()].function != program.entry) {
    throw PredictionInvalidError(
        "chain does not end in the entry function " +
            program.functions[program.entry].name,
        raw);
  }
  return MakePredictedStack(std::move(frames));
}

PredictionOutcome Predict(const PredictorConfig& config,
                          const Benchmark& benchmark, const CallGraph& cg,
                          LocationId target, ChatClient* client) {
  const TargetProgram& program = benchmark.program;
  PredictionOutcome outcome;

  switch (config.strategy) {
    case PredictorStrategy::kOracle: {
      if (!benchmark.witness) {
        throw std::invalid_argument(
            "oracle predictor requires a benchmark witness");
      }
      std::vector<LocationId> frames = WitnessStack(program, *benchmark.witness);
      if (frames.empty() || frames.front() != target) {
        throw std::invalid_argument(
            "benchmark witness does not crash at the requested target");
      }
      outcome.stack = MakePredictedStack(std::move(frames));
      return outcome;
    }

    case PredictorStrategy::kAblation: {
      std::vector<uint32_t> reachable =
          ReachableFunctions(cg, program.stmt_at[target].function);
      std::set<uint32_t> in_slice(reachable.begin(), reachable.end());
      std::vector<LocationId> frames{target};
      for (const CallEdge& e : cg.edges) {
        if (e.site != target && in_slice.count(e.caller) &&
            in_slice.count(e.callee)) {
          frames.push_back(e.site);
        }
      }
      std::sort(frames.begin() + 1, frames.end());
      outcome.stack = MakePredictedStack(std::move(frames));
      return outcome;
    }

    case PredictorStrategy::kMock: {
      std::vector<LocationId> frames;
      for (const Location& loc : config.mock_script) {
        auto id = program.FindLocation(loc);
        if (!id) {
          throw PredictionInvalidError(
              "mock script names unknown location " + FormatLocation(loc),
              "");
        }
        frames.push_back(*id);
      }
      if (frames.empty()) frames.push_back(target);
      outcome.stack = MakePredictedStack(std::move(frames));
      return outcome;
    }

    case PredictorStrategy::kLlm:
      break;
  }

  if (config.endpoint_url.empty() || config.model_name.empty()) {
    throw std::invalid_argument(
        "llm predictor requires an endpoint url and a model name");
  }
  uint32_t f_target = program.stmt_at[target].function;
  std::vector<uint32_t> reachable = ReachableFunctions(cg, f_target);
  CodeSlice slice = RenderSlice(program, cg, reachable, target);
  Location target_loc = program.locations.Get(target);

  ChatRequest request;
  request.endpoint_url = config.endpoint_url;
  request.model = config.model_name;
  if (const char* key = std::getenv(config.api_key_env.c_str())) {
    request.api_key = key;
  }
  request.temperature = config.temperature;
  request.max_tokens = config.max_tokens;
  request.max_retries = config.max_retries;
  request.system = PromptSystemMessage();
  request.user =
      PromptUserMessage(slice, target_loc, program.functions[f_target].name);

  HttpChatClient fallback;
  ChatClient* transport = client ? client : &fallback;

  int attempts = config.max_retries < 1 ? 1 : config.max_retries;
  for (int attempt = 0;; ++attempt) {
    std::string raw = transport->Complete(request);
    try {
      std::vector<std::string> warnings;
      outcome.stack =
          ParseResponse(raw, program, cg, reachable, target, &warnings);
      outcome.warnings.insert(outcome.warnings.end(), warnings.begin(),
                              warnings.end());
      return outcome;
    } catch (const PredictionInvalidError&) {
      if (attempt + 1 >= attempts) throw;
      outcome.warnings.push_back("retrying after unusable model output");
    }
  }
}

}  // namespace stackfuzz
