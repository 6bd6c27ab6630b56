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

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace perslex {

enum class Trait { O, C, E, A, N };

inline constexpr std::array<Trait, 5> kTraits = {Trait::O, Trait::C, Trait::E, Trait::A, Trait::N};

char trait_code(Trait t) noexcept;
std::string_view trait_name(Trait t) noexcept;
// Accepts single-letter codes or full names, case-insensitive.
std::optional<Trait> parse_trait(std::string_view s);

// Ordered, unique, normalized word list. First occurrence wins.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(const std::vector<std::string>& raw_entries);

  // Normalizes and appends. Returns false for empty or duplicate entries.
  bool add(std::string_view raw);

  const std::vector<std::string>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::string& operator[](std::size_t i) const { return entries_[i]; }
  std::optional<std::size_t> index_of(std::string_view normalized) const;
  bool contains(std::string_view normalized) const { return index_of(normalized).has_value(); }

  friend bool operator==(const Lexicon& a, const Lexicon& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<std::string> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct LexiconLoadReport {
  std::size_t lines = 0;
  std::size_t duplicates = 0;
  std::size_t empty_lines = 0;
};

// One term per line. Throws Error{io} or Error{empty_input}.
Lexicon load_adjectives(const std::filesystem::path& path, LexiconLoadReport* report = nullptr);
Lexicon parse_adjectives(std::string_view contents, LexiconLoadReport* report = nullptr);
std::string serialize_lexicon(const Lexicon& lexicon);

inline constexpr std::size_t kIpipItemCount = 300;

struct IpipItem {
  // Verbatim phrase; this is what gets embedded.
  std::string text;
  // Normalized copy used for joins against vector ids.
  std::string key;
  std::optional<Trait> trait;
  std::string facet;

  friend bool operator==(const IpipItem&, const IpipItem&) = default;
};

struct RejectedRow {
  std::size_t line = 0;
  std::string reason;
};

struct IpipLoadReport {
  std::vector<RejectedRow> rejected;
  std::vector<std::string> warnings;
};

// CSV with header containing `text` and optionally `trait`, `facet`.
std::vector<IpipItem> load_ipip(const std::filesystem::path& path, IpipLoadReport* report = nullptr);
std::vector<IpipItem> parse_ipip(std::string_view contents, IpipLoadReport* report = nullptr);

// Splits one CSV record (RFC 4180 quoting, no embedded newlines).
std::vector<std::string> split_csv_line(std::string_view line);

class MarkerSet {
 public:
  const std::vector<std::string>& of(Trait t) const { return markers_[static_cast<std::size_t>(t)]; }
  std::vector<std::string>& of(Trait t) { return markers_[static_cast<std::size_t>(t)]; }
  std::size_t total() const noexcept;

  friend bool operator==(const MarkerSet&, const MarkerSet&) = default;

 private:
  std::array<std::vector<std::string>, 5> markers_;
};

// Lines `T:adj,adj,...`; `#` comments. All five traits required, none empty.
MarkerSet load_markers(const std::filesystem::path& path);
MarkerSet parse_markers(std::string_view contents);
std::string serialize_markers(const MarkerSet& markers);

// Markers (normalized) that the lexicon does not contain, in trait order.
std::vector<std::string> missing_markers(const MarkerSet& markers, const Lexicon& lexicon);

}  // namespace perslex
