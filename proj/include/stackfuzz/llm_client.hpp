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

#ifndef STACKFUZZ_LLM_CLIENT_HPP_
#define STACKFUZZ_LLM_CLIENT_HPP_

#include <stdexcept>
#include <string>

namespace stackfuzz {

struct ChatRequest {
  std::string endpoint_url;   // base URL; /chat/completions is appended
  std::string model;
  std::string api_key;        // empty: no Authorization header
  double temperature = 1.0;
  int max_tokens = 2048;
  int max_retries = 3;
  std::string system;
  std::string user;
};

// Transport failure after retries, or a response missing
// choices[0].message.content.
class ChatTransportError : public std::runtime_error {
 public:
  explicit ChatTransportError(const std::string& msg)
      : std::runtime_error(msg) {}
};

// Chat-completions transport. The interface exists so tests can stub the
// model; production code uses HttpChatClient.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  // Returns choices[0].message.content. Throws ChatTransportError.
  virtual std::string Complete(const ChatRequest& request) = 0;
};

// POSTs {base}/chat/completions with a system + user message pair and a
// bearer token. Retries transport-level failures up to max_retries.
class HttpChatClient : public ChatClient {
 public:
  std::string Complete(const ChatRequest& request) override;
};

}  // namespace stackfuzz

#endif  // STACKFUZZ_LLM_CLIENT_HPP_
