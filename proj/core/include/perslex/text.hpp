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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Unicode helpers shared by every module that joins on text keys.
namespace perslex::text {

// Case-fold then NFC. Invalid UTF-8 sequences become U+FFFD.
std::string fold_nfc(std::string_view s);

// fold_nfc plus removal of leading/trailing Unicode whitespace. This is the
// join key for adjectives, IPIP items and vector ids.
std::string normalize_key(std::string_view s);

bool is_ascii(std::string_view s) noexcept;

// Decodes one code point starting at `pos` and advances it. Malformed input
// yields U+FFFD and consumes one byte.
char32_t next_codepoint(std::string_view s, std::size_t& pos) noexcept;

// Token characters: letters, digits, apostrophe, hyphen.
bool is_token_char(char32_t cp) noexcept;

// Reference tokenizer: fold_nfc the text, then split on every code point that
// is not a token character. Empty tokens are dropped.
std::vector<std::string> tokenize(std::string_view body);

std::string_view trim_ascii(std::string_view s) noexcept;

std::vector<std::string_view> split(std::string_view s, char sep);

// Shortest representation that parses back to the same double.
std::string format_real(double v);
std::optional<double> parse_real(std::string_view s);

}  // namespace perslex::text
