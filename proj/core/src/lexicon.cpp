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

#include "perslex/lexicon.hpp"

#include <algorithm>

#include "io_util.hpp"
#include "perslex/error.hpp"
#include "perslex/text.hpp"

namespace perslex {

char trait_code(Trait t) noexcept {
  switch (t) {
    case Trait::O: return 'O';
    case Trait::C: return 'C';
    case Trait::E: return 'E';
    case Trait::A: return 'A';
    case Trait::N: return 'N';
  }
  return '?';
}

std::string_view trait_name(Trait t) noexcept {
  switch (t) {
    case Trait::O: return "Openness";
    case Trait::C: return "Conscientiousness";
    case Trait::E: return "Extraversion";
    case Trait::A: return "Agreeableness";
    case Trait::N: return "Neuroticism";
  }
  return "?";
}

std::optional<Trait> parse_trait(std::string_view s) {
  std::string lower(text::trim_ascii(s));
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (Trait t : kTraits) {
    std::string name(trait_name(t));
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower.size() == 1 && lower[0] == std::tolower(trait_code(t))) return t;
    if (lower == name) return t;
  }
  return std::nullopt;
}

Lexicon::Lexicon(const std::vector<std::string>& raw_entries) {
  for (const auto& e : raw_entries) add(e);
}

bool Lexicon::add(std::string_view raw) {
  std::string key = text::normalize_key(raw);
  if (key.empty() || index_.contains(key)) return false;
  index_.emplace(key, entries_.size());
  entries_.push_back(std::move(key));
  return true;
}

std::optional<std::size_t> Lexicon::index_of(std::string_view normalized) const {
  if (auto it = index_.find(std::string(normalized)); it != index_.end()) return it->second;
  return std::nullopt;
}

Lexicon parse_adjectives(std::string_view contents, LexiconLoadReport* report) {
  Lexicon lexicon;
  LexiconLoadReport r;
  if (contents.ends_with('\n')) contents.remove_suffix(1);
  if (!contents.empty()) {
    for (std::string_view line : text::split(contents, '\n')) {
      ++r.lines;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (text::normalize_key(line).empty()) {
        ++r.empty_lines;
        continue;
      }
      if (!lexicon.add(line)) ++r.duplicates;
    }
  }
  if (report) *report = r;
  if (lexicon.empty()) throw Error(Errc::empty_input, "lexicon has no usable entries");
  return lexicon;
}

Lexicon load_adjectives(const std::filesystem::path& path, LexiconLoadReport* report) {
  try {
    return parse_adjectives(detail::read_file(path), report);
  } catch (const Error& e) {
    if (e.code() == Errc::io) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string serialize_lexicon(const Lexicon& lexicon) {
  std::string out;
  for (const auto& e : lexicon.entries()) {
    out += e;
    out += '\n';
  }
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted) throw Error(Errc::parse, "unterminated quote");
  fields.push_back(std::move(field));
  return fields;
}

std::vector<IpipItem> parse_ipip(std::string_view contents, IpipLoadReport* report) {
  IpipLoadReport r;
  std::vector<IpipItem> items;
  std::optional<std::size_t> text_col;
  std::optional<std::size_t> trait_col;
  std::optional<std::size_t> facet_col;
  bool have_header = false;
  std::size_t line_no = 0;
  for (std::string_view line : text::split(contents, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim_ascii(line).empty()) continue;
    std::vector<std::string> fields;
    try {
      fields = split_csv_line(line);
    } catch (const Error&) {
      if (!have_header) throw Error(Errc::parse, "malformed IPIP header");
      r.rejected.push_back({line_no, "unterminated quote"});
      continue;
    }
    if (!have_header) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        std::string name(text::trim_ascii(fields[i]));
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (i == 0 && name.starts_with("\xEF\xBB\xBF")) name.erase(0, 3);
        if (name == "text") text_col = i;
        else if (name == "trait") trait_col = i;
        else if (name == "facet") facet_col = i;
      }
      if (!text_col) throw Error(Errc::parse, "IPIP header has no 'text' column");
      have_header = true;
      continue;
    }
    auto get = [&](std::optional<std::size_t> col) -> std::string {
      if (!col || *col >= fields.size()) return {};
      return std::string(text::trim_ascii(fields[*col]));
    };
    IpipItem item;
    item.text = get(text_col);
    item.key = text::normalize_key(item.text);
    if (item.key.empty()) {
      r.rejected.push_back({line_no, "empty text"});
      continue;
    }
    if (std::string t = get(trait_col); !t.empty()) {
      item.trait = parse_trait(t);
      if (!item.trait) {
        r.rejected.push_back({line_no, "unknown trait '" + t + "'"});
        continue;
      }
    }
    item.facet = get(facet_col);
    items.push_back(std::move(item));
  }
  if (!have_header) throw Error(Errc::empty_input, "IPIP file is empty");
  if (items.size() != kIpipItemCount) {
    r.warnings.push_back("expected " + std::to_string(kIpipItemCount) + " IPIP items, found " +
                         std::to_string(items.size()));
  }
  if (report) *report = std::move(r);
  return items;
}

std::vector<IpipItem> load_ipip(const std::filesystem::path& path, IpipLoadReport* report) {
  try {
    return parse_ipip(detail::read_file(path), report);
  } catch (const Error& e) {
    if (e.code() == Errc::io) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::size_t MarkerSet::total() const noexcept {
  std::size_t n = 0;
  for (const auto& m : markers_) n += m.size();
  return n;
}

MarkerSet parse_markers(std::string_view contents) {
  MarkerSet set;
  std::array<bool, 5> seen{};
  std::size_t line_no = 0;
  for (std::string_view line : text::split(contents, '\n')) {
    ++line_no;
    line = text::trim_ascii(line);
    if (line.empty() || line.front() == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw Error(Errc::parse, "markers line " + std::to_string(line_no) + ": expected 'trait:adjectives'");
    }
    auto trait = parse_trait(line.substr(0, colon));
    if (!trait) {
      throw Error(Errc::parse, "markers line " + std::to_string(line_no) + ": unknown trait '" +
                                   std::string(line.substr(0, colon)) + "'");
    }
    auto idx = static_cast<std::size_t>(*trait);
    if (seen[idx]) throw Error(Errc::parse, std::string("trait listed twice: ") + trait_code(*trait));
    seen[idx] = true;
    for (std::string_view word : text::split(line.substr(colon + 1), ',')) {
      std::string key = text::normalize_key(word);
      if (!key.empty()) set.of(*trait).push_back(std::move(key));
    }
  }
  for (Trait t : kTraits) {
    if (!seen[static_cast<std::size_t>(t)]) {
      throw Error(Errc::missing_input, std::string("marker set is missing trait ") + trait_code(t));
    }
    if (set.of(t).empty()) {
      throw Error(Errc::empty_input, std::string("marker list for trait ") + trait_code(t) + " is empty");
    }
  }
  return set;
}

MarkerSet load_markers(const std::filesystem::path& path) {
  try {
    return parse_markers(detail::read_file(path));
  } catch (const Error& e) {
    if (e.code() == Errc::io) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string serialize_markers(const MarkerSet& markers) {
  std::string out;
  for (Trait t : kTraits) {
    out += trait_code(t);
    out += ':';
    const auto& list = markers.of(t);
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i) out += ',';
      out += list[i];
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string> missing_markers(const MarkerSet& markers, const Lexicon& lexicon) {
  std::vector<std::string> missing;
  for (Trait t : kTraits) {
    for (const auto& m : markers.of(t)) {
      if (!lexicon.contains(m)) missing.push_back(m);
    }
  }
  return missing;
}

}  // namespace perslex
