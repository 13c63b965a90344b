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

#include "stackfuzz/location.hpp"

namespace stackfuzz {

std::string FormatLocation(const Location& loc) {
  return loc.file + ":" + std::to_string(loc.line);
}

std::optional<Location> ParseLocation(std::string_view text) {
  size_t colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0 ||
      colon + 1 >= text.size()) {
    return std::nullopt;
  }
  long line = 0;
  for (size_t i = colon + 1; i < text.size(); ++i) {
    char c = text[i];
    if (c < '0' || c > '9') return std::nullopt;
    line = line * 10 + (c - '0');
    if (line > 1'000'000'000) return std::nullopt;
  }
  if (line <= 0) return std::nullopt;
  return Location{std::string(text.substr(0, colon)), static_cast<int>(line)};
}

LocationId LocationTable::Intern(const Location& loc) {
  auto it = index_.find(loc);
  if (it != index_.end()) return it->second;
  LocationId id = static_cast<LocationId>(locations_.size());
  locations_.push_back(loc);
  index_.emplace(loc, id);
  return id;
}

std::optional<LocationId> LocationTable::Find(const Location& loc) const {
  auto it = index_.find(loc);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace stackfuzz
