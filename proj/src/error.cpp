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

#include "serialcon/error.hpp"

namespace serialcon {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_size:
      return "invalid size";
    case Errc::structural:
      return "structural error";
    case Errc::precondition:
      return "precondition violated";
    case Errc::internal_inconsistency:
      return "internal inconsistency";
    case Errc::unsupported_coordinates:
      return "unsupported coordinates";
    case Errc::numerical_failure:
      return "numerical failure";
    case Errc::degenerate_parameters:
      return "degenerate parameters";
    case Errc::domain:
      return "domain error";
    case Errc::config:
      return "config error";
    case Errc::io:
      return "i/o error";
  }
  return "unknown error";
}

}  // namespace serialcon
