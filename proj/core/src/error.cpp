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

#include "perslex/error.hpp"

namespace perslex {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::io: return "io";
    case Errc::parse: return "parse";
    case Errc::empty_input: return "empty-input";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::duplicate_id: return "duplicate-id";
    case Errc::non_finite: return "non-finite";
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::undefined_similarity: return "undefined-similarity";
    case Errc::non_separable: return "non-separable";
    case Errc::missing_input: return "missing-input";
    case Errc::unresolved: return "unresolved";
    case Errc::config: return "config";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace perslex
