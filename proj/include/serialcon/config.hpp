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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace serialcon::config {

// A small TOML subset: [section] headers (an optional "scenario." prefix is
// stripped), key = value lines, '#' comments. Values are numbers, "strings",
// true/false, single-line [arrays] of numbers or strings, and single-line
// {inline = tables} of numbers.

using Scalar = std::variant<double, std::string, bool>;
using Array = std::vector<Scalar>;
using Table = std::map<std::string, double>;
using Value = std::variant<double, std::string, bool, Array, Table>;

struct Entry {
  Value value;
  int line = 0;
};

struct Section {
  std::string name;  // empty for keys before the first header
  int line = 0;
  std::map<std::string, Entry> entries;
};

struct Document {
  std::vector<Section> sections;
};

// Throws Error(config) naming the line on malformed input, duplicate keys or
// duplicate section names.
Document parse(std::string_view text);

std::string describe(const Value& v);

}  // namespace serialcon::config
