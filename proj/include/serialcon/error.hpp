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

#include <stdexcept>
#include <string>
#include <string_view>

namespace serialcon {

enum class Errc {
  invalid_size,
  structural,
  precondition,
  internal_inconsistency,
  unsupported_coordinates,
  numerical_failure,
  degenerate_parameters,
  domain,
  config,
  io,
};

std::string_view to_string(Errc code) noexcept;

// All library failures are reported through this one exception type; callers
// that need to branch (the CLI maps codes to exit statuses) inspect code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace serialcon
