/*
 * Copyright 2026 The serialcon Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

#include "serialcon/graphs.hpp"

namespace serialcon {

// Edge-list text format:
//   n <count>
//   i j w        (1-based indices, one edge per line, w > 0)
// Blank lines and lines starting with '#' are ignored. Repeated edges are
// an error. Throws Error(config) with the offending line number.
WeightedDigraph read_edge_list(std::istream& in);
WeightedDigraph read_edge_list_file(const std::filesystem::path& path);

// Edges in row-major order, weights as %.17g so a round trip is exact.
void write_edge_list(std::ostream& out, const WeightedDigraph& g);

// Writes through a sibling temporary file and renames it into place, so a
// reader never sees a partial file. Throws Error(io).
void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);

}  // namespace serialcon
