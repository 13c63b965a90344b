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

#include "stackfuzz/llm_client.hpp"

#include <json.hpp>

#include <httplib.h>

namespace stackfuzz {

namespace {

// Splits "https://host[:port]/base/path" into an httplib origin and the
// path prefix the completions route is appended to.
struct ParsedUrl {
  std::string origin;
  std::string path;
};

ParsedUrl SplitUrl(const std::string& url) {
  size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ChatTransportError("endpoint url lacks a scheme: " + url);
  }
  size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, ""};
  std::string path = url.substr(path_start);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {url.substr(0, path_start), path};
}

}  // namespace

std::string HttpChatClient::Complete(const ChatRequest& request) {
  ParsedUrl target = SplitUrl(request.endpoint_url);

  nlohmann::json body = {
      {"model", request.model},
      {"temperature", request.temperature},
      {"max_tokens", request.max_tokens},
      {"messages",
       {{{"role", "system"}, {"content", request.system}},
        {{"role", "user"}, {"content", request.user}}}},
  };
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (!request.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + request.api_key);
  }

  std::string last_error;
  int attempts = request.max_retries < 1 ? 1 : request.max_retries;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    httplib::Client client(target.origin);
    client.set_connection_timeout(30, 0);
    client.set_read_timeout(300, 0);
    auto res = client.Post(target.path + "/chat/completions", headers,
                           payload, "application/json");
    if (!res) {
      last_error = "connection failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      last_error = "http status " + std::to_string(res->status);
      continue;
    }
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::parse_error& e) {
      last_error = std::string("bad response json: ") + e.what();
      continue;
    }
    if (!doc.contains("choices") || !doc["choices"].is_array() ||
        doc["choices"].empty() || !doc["choices"][0].contains("message") ||
        !doc["choices"][0]["message"].contains("content") ||
        !doc["choices"][0]["message"]["content"].is_string()) {
      last_error = "response missing choices[0].message.content";
      continue;
    }
    return doc["choices"][0]["message"]["content"].get<std::string>();
  }
  throw ChatTransportError("chat completion failed after " +
                           std::to_string(attempts) + " attempts: " +
                           last_error);
}

}  // namespace stackfuzz
