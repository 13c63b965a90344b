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

#ifndef STACKFUZZ_BUILTIN_HPP_
#define STACKFUZZ_BUILTIN_HPP_

#include <optional>
#include <string>
#include <vector>

namespace stackfuzz {

// Built-in benchmark documents compiled into the library. "cxxfilt_toy" is a
// miniature demangler with a length-check bug guarded by one boolean and one
// string input channel (byte 0 selects the branch, bytes 1.. are the text).
std::vector<std::string> BuiltinBenchmarkNames();
std::optional<std::string> BuiltinBenchmarkDocument(const std::string& name);

}  // namespace stackfuzz

#endif  // STACKFUZZ_BUILTIN_HPP_
