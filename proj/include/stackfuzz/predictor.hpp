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
// Produces the call stack a crash at the target is expected to unwind
// through. Four strategies:
//   oracle   - replay the benchmark witness and read the real stack
//   ablation - every call site between reachable functions, plus the target
//   llm      - render an annotated slice, prompt a chat model, repair and
//              validate its answer
//   mock     - scripted stack, for tests

#ifndef STACKFUZZ_PREDICTOR_HPP_
#define STACKFUZZ_PREDICTOR_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stackfuzz/callgraph.hpp"
#include "stackfuzz/llm_client.hpp"
#include "stackfuzz/loader.hpp"

namespace stackfuzz {

enum class PredictorStrategy : uint8_t { kOracle, kAblation, kLlm, kMock };

std::string PredictorTag(PredictorStrategy s);
std::optional<PredictorStrategy> ParsePredictorTag(const std::string& tag);

struct PredictorConfig {
  PredictorStrategy strategy = PredictorStrategy::kAblation;
  std::string endpoint_url;                    // llm: required
  std::string model_name;                      // llm: required
  std::string api_key_env = "OPENAI_API_KEY";  // env var holding the token
  double temperature = 1.0;
  int max_tokens = 2048;
  int max_retries = 3;
  std::vector<Location> mock_script;
};

struct PredictedStack {
  // frames[0] is the target location; subsequent frames walk outward. For
  // the ablation strategy the order past frames[0] carries no meaning.
  std::vector<LocationId> frames;
  std::vector<LocationId> as_set;  // sorted unique
};

PredictedStack MakePredictedStack(std::vector<LocationId> frames);

// Model output that stays invalid after repair. Carries the raw response.
class PredictionInvalidError : public std::runtime_error {
 public:
  PredictionInvalidError(const std::string& msg, std::string raw)
      : std::runtime_error(msg), raw_response(std::move(raw)) {}
  std::string raw_response;
};

struct PredictionOutcome {
  PredictedStack stack;
  std::vector<std::string> warnings;  // dropped-line notes from parsing
};

// Full prompt text: system message, task framing with <TARGET>/<FUNCTION>/
// <CODE> substituted, format instructions and the worked output examples.
std::string BuildPrompt(const CodeSlice& slice, const Location& target,
                        const std::string& target_function);
// The two wire messages separately (BuildPrompt is their concatenation).
std::string PromptSystemMessage();
std::string PromptUserMessage(const CodeSlice& slice, const Location& target,
                              const std::string& target_function);

// Repair-then-validate of raw model output. Keeps lines matching
// "file:line" (an optional '#' comment may trail), drops unknown call
// sites with a warning, prepends the target when the innermost frame is
// missing, then demands one unbroken caller chain from the target's
// function to the entry function. Throws PredictionInvalidError otherwise.
PredictedStack ParseResponse(const std::string& raw,
                             const TargetProgram& program, const CallGraph& cg,
                             std::span<const uint32_t> reachable,
                             LocationId target,
                             std::vector<std::string>* warnings = nullptr);

// Runs the configured strategy. `client` supplies the transport for llm
// (defaults to HttpChatClient); other strategies ignore it. Oracle requires
// the benchmark witness. Throws PredictionInvalidError for unusable llm
// content and ChatTransportError for transport failure after retries.
PredictionOutcome Predict(const PredictorConfig& config,
                          const Benchmark& benchmark, const CallGraph& cg,
                          LocationId target, ChatClient* client = nullptr);

}  // namespace stackfuzz

#endif  // STACKFUZZ_PREDICTOR_HPP_
