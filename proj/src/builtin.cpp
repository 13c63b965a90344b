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

#include "stackfuzz/builtin.hpp"

namespace stackfuzz {

namespace {

// A miniature demangler in the shape of the historical cxxfilt bug: a
// digit run is parsed into an unchecked length that is then used to copy
// into a fixed-size output buffer. The input layout is one mode byte
// followed by the mangled string. Blocks g_cold/b_cold sit behind
// constant-false branches so the listing's elided tails stay in the
// control-flow graph without ever executing.
constexpr const char kCxxfiltToy[] = R"json({
  "entry": "main",
  "functions": {
    "gnu_special": {
      "file": "cxxfilt.c",
      "params": ["pos", "cap"],
      "source": {
        "start": 3,
        "lines": [
          "void gnu_special(const char** mangled){",
          "  if('0' <= **mangled && **mangled <= '9'){",
          "    int n = 0;",
          "    while('0' <= **mangled && **mangled <= '9'){",
          "      n *= 10;",
          "      n += **mangled - '0';",
          "      (*mangled)++;",
          "    }",
          "    memcpy(*output, *mangled, n);",
          "  }",
          "  ...",
          "}"
        ]
      },
      "blocks": [
        {
          "id": "g0",
          "stmts": [{"line": 4, "nop": true}],
          "term": {"branch": {"cond": "is_digit(in[pos])", "then": "g1", "else": "g_cold"}}
        },
        {
          "id": "g1",
          "stmts": [{"line": 5, "assign": "n", "expr": "0"}],
          "term": {"goto": "g2"}
        },
        {
          "id": "g2",
          "stmts": [{"line": 6, "nop": true}],
          "term": {"branch": {"cond": "is_digit(in[pos])", "then": "g3", "else": "g4"}}
        },
        {
          "id": "g3",
          "stmts": [
            {"line": 7, "assign": "n", "expr": "n * 10"},
            {"line": 8, "assign": "n", "expr": "n + (in[pos] - '0')"},
            {"line": 9, "assign": "pos", "expr": "pos + 1"}
          ],
          "term": {"goto": "g2"}
        },
        {
          "id": "g4",
          "stmts": [{"line": 11, "crash_if": "n > cap || n < 0"}],
          "term": "return"
        },
        {
          "id": "g_cold",
          "term": {"branch": {"cond": "0 != 0", "then": "g_dead", "else": "g_exit"}}
        },
        {
          "id": "g_dead",
          "stmts": [{"line": 13, "nop": true}],
          "term": {"goto": "g_exit"}
        },
        {"id": "g_exit", "term": "return"}
      ]
    },
    "internal_cplus_demangle": {
      "file": "cxxfilt.c",
      "params": ["pos", "flag"],
      "source": {
        "start": 15,
        "lines": [
          "void internal_cplus_demangle(const char** mangled, bool flag){",
          "  if(flag){",
          "    if(**mangled != '\\0'){",
          "      memcpy(*output, \"cplus_marker\", 12);",
          "      (*output) += 12;",
          "      gnu_special(mangled);",
          "    }",
          "  }else{",
          "    if(strlen(*mangled) >= 9 && strncmp(*mangled, \"_GLOBAL_\", 8) == 0 && !('0' <= (*mangled)[8] && (*mangled)[8] <= '9')){",
          "      (*mangled) += 8;",
          "      gnu_special(mangled);",
          "    }",
          "  }",
          "  ...",
          "}"
        ]
      },
      "blocks": [
        {
          "id": "b0",
          "stmts": [{"line": 16, "nop": true}],
          "term": {"branch": {"cond": "flag != 0", "then": "b_then", "else": "b_else"}}
        },
        {
          "id": "b_then",
          "stmts": [{"line": 17, "nop": true}],
          "term": {"branch": {"cond": "in[pos] != 0", "then": "b_then2", "else": "b_cold"}}
        },
        {
          "id": "b_then2",
          "stmts": [
            {"line": 18, "assign": "scratch", "expr": "12"},
            {"line": 19, "assign": "rest", "expr": "64 - scratch"},
            {"line": 20, "call": "gnu_special", "args": ["pos", "rest"]}
          ],
          "term": "return"
        },
        {
          "id": "b_else",
          "stmts": [{"line": 23, "nop": true}],
          "term": {"branch": {"cond": "strlen(pos) >= 9 && strncmp(pos, \"_GLOBAL_\") == 0 && !is_digit(in[pos + 8])", "then": "b_else2", "else": "b_cold"}}
        },
        {
          "id": "b_else2",
          "stmts": [
            {"line": 24, "assign": "pos", "expr": "pos + 8"},
            {"line": 25, "call": "gnu_special", "args": ["pos", "64"]}
          ],
          "term": "return"
        },
        {
          "id": "b_cold",
          "term": {"branch": {"cond": "0 != 0", "then": "b_dead", "else": "b_exit"}}
        },
        {
          "id": "b_dead",
          "stmts": [{"line": 28, "nop": true}],
          "term": {"goto": "b_exit"}
        },
        {"id": "b_exit", "term": "return"}
      ]
    },
    "main": {
      "file": "cxxfilt.c",
      "params": [],
      "source": {
        "start": 30,
        "lines": [
          "int main(){",
          "  const char** mangled = input1();",
          "  bool flag = input2();",
          "  internal_cplus_demangle(mangled, flag);",
          "  ...",
          "}"
        ]
      },
      "blocks": [
        {
          "id": "m0",
          "stmts": [
            {"line": 31, "assign": "pos", "expr": "1"},
            {"line": 32, "assign": "flag", "expr": "in[0]"},
            {"line": 33, "call": "internal_cplus_demangle", "args": ["pos", "flag"]}
          ],
          "term": "return"
        }
      ]
    }
  },
  "targets": ["cxxfilt.c:11"],
  "witness": "01393938323434333533",
  "vfg_edges": [
    ["cxxfilt.c:31", "cxxfilt.c:33"],
    ["cxxfilt.c:33", "cxxfilt.c:20"],
    ["cxxfilt.c:33", "cxxfilt.c:24"],
    ["cxxfilt.c:24", "cxxfilt.c:25"],
    ["cxxfilt.c:25", "cxxfilt.c:9"],
    ["cxxfilt.c:20", "cxxfilt.c:9"],
    ["cxxfilt.c:20", "cxxfilt.c:11"],
    ["cxxfilt.c:25", "cxxfilt.c:11"],
    ["cxxfilt.c:9", "cxxfilt.c:11"],
    ["cxxfilt.c:5", "cxxfilt.c:7"],
    ["cxxfilt.c:7", "cxxfilt.c:8"],
    ["cxxfilt.c:20", "cxxfilt.c:8"],
    ["cxxfilt.c:25", "cxxfilt.c:8"],
    ["cxxfilt.c:9", "cxxfilt.c:8"],
    ["cxxfilt.c:8", "cxxfilt.c:11"]
  ],
  "seeds": ["01416c696365", "005f474c4f42414c5f426f62"]
})json";

}  // namespace

std::vector<std::string> BuiltinBenchmarkNames() { return {"cxxfilt_toy"}; }

std::optional<std::string> BuiltinBenchmarkDocument(const std::string& name) {
  if (name == "cxxfilt_toy") return std::string(kCxxfiltToy);
  return std::nullopt;
}

}  // namespace stackfuzz
