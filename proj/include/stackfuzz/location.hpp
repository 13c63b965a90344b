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

#ifndef STACKFUZZ_LOCATION_HPP_
#define STACKFUZZ_LOCATION_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace stackfuzz {

// A source position, the atom every graph, trace and report is built from.
struct Location {
  std::string file;
  int line = 0;

  auto operator<=>(const Location&) const = default;
};

// Renders "file:line". Parse accepts exactly that shape (line strictly
// positive); returns nullopt otherwise.
std::string FormatLocation(const Location& loc);
std::optional<Location> ParseLocation(std::string_view text);

// Dense ids for statement locations. Hot paths (executor, graphs, scoring)
// work on ids; text forms appear only at the serialization boundary.
using LocationId = uint32_t;

class LocationTable {
 public:
  LocationId Intern(const Location& loc);
  std::optional<LocationId> Find(const Location& loc) const;
  const Location& Get(LocationId id) const { return locations_[id]; }
  size_t size() const { return locations_.size(); }

 private:
  std::vector<Location> locations_;
  std::map<Location, LocationId> index_;
};

}  // namespace stackfuzz

#endif  // STACKFUZZ_LOCATION_HPP_
