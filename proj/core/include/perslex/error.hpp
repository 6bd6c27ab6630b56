// Copyright 2026 the perslex authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace perslex {

enum class Errc {
  io,
  parse,
  empty_input,
  dimension_mismatch,
  duplicate_id,
  non_finite,
  invalid_argument,
  undefined_similarity,
  non_separable,
  missing_input,
  unresolved,
  config,
};

std::string_view to_string(Errc code);

// Every failure the library reports carries a code so callers (and tests) can
// tell load failures apart without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace perslex
