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

#include <array>
#include <string_view>
#include <vector>

#include "serialcon/scenario.hpp"

namespace serialcon {

namespace {

struct RawPreset {
  std::string_view id;
  std::string_view text;
};

constexpr RawPreset kRaw[] = {
#include "serialcon_presets.inc"
};

// The description is the first comment line of the preset file.
std::string_view first_comment(std::string_view text) {
  const auto hash = text.find('#');
  if (hash == std::string_view::npos) return {};
  auto line = text.substr(hash + 1);
  line = line.substr(0, line.find('\n'));
  while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
  return line;
}

std::vector<Preset> build_catalog() {
  std::vector<Preset> out;
  for (const RawPreset& raw : kRaw) {
    out.push_back({raw.id, first_comment(raw.text), raw.text});
  }
  return out;
}

}  // namespace

std::span<const Preset> presets() {
  static const std::vector<Preset> catalog = build_catalog();
  return catalog;
}

const Preset* find_preset(std::string_view id) {
  for (const Preset& p : presets()) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

}  // namespace serialcon
