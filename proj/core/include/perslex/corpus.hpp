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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "perslex/lexicon.hpp"

namespace perslex {

// Sequential source of raw text lines (without the trailing newline).
class LineSource {
 public:
  virtual ~LineSource() = default;
  virtual bool next(std::string& line) = 0;
};

class MemoryLineSource final : public LineSource {
 public:
  explicit MemoryLineSource(std::vector<std::string> lines) : lines_(std::move(lines)) {}
  bool next(std::string& line) override;

 private:
  std::vector<std::string> lines_;
  std::size_t pos_ = 0;
};

// Plain text, or gzip / zstd chosen by the .gz / .zst / .zstd extension.
std::unique_ptr<LineSource> open_line_source(const std::filesystem::path& path);

struct CommentRecord {
  std::string id;
  std::string subreddit;  // case-folded
  std::string body;
};

struct FieldNames {
  std::string id = "id";
  std::string subreddit = "subreddit";
  std::string body = "body";
};

// One JSON object per line. Returns nullopt for malformed records: invalid
// JSON, a missing or non-string subreddit/body, or a non-scalar id.
std::optional<CommentRecord> parse_comment(std::string_view line, const FieldNames& fields = {});

// Canonical community key: case-folded, optional leading "r/" removed.
std::string community_key(std::string_view name);

enum class CountMode { tokens, comments };
enum class MatchStrategy { automaton, hash_set };

// Finds lexicon entries as whole tokens. Text is case-folded and
// NFC-normalized; tokens are maximal runs of letters, digits, apostrophes and
// hyphens. Entries that are not a single token (e.g. contain spaces) never
// match and are counted in unmatchable().
class TokenMatcher {
 public:
  TokenMatcher(const Lexicon& lexicon, MatchStrategy strategy = MatchStrategy::automaton);
  ~TokenMatcher();
  TokenMatcher(TokenMatcher&&) noexcept;
  TokenMatcher& operator=(TokenMatcher&&) noexcept;

  // Appends the lexicon index of every matching token occurrence, in text order.
  void match(std::string_view body, std::vector<std::uint32_t>& hits) const;

  std::size_t unmatchable() const noexcept;
  MatchStrategy strategy() const noexcept { return strategy_; }

 private:
  struct Automaton;
  struct HashSet;
  MatchStrategy strategy_;
  std::unique_ptr<Automaton> automaton_;
  std::unique_ptr<HashSet> hash_set_;
};

struct CommunityCounts {
  std::uint64_t comment_count = 0;
  std::uint64_t total_mentions = 0;
  // lexicon index -> occurrences
  std::map<std::uint32_t, std::uint64_t> adjectives;

  friend bool operator==(const CommunityCounts&, const CommunityCounts&) = default;
};

class MentionCounts {
 public:
  MentionCounts() = default;
  explicit MentionCounts(std::vector<std::string> lexicon) : lexicon_(std::move(lexicon)) {}

  const std::vector<std::string>& lexicon() const noexcept { return lexicon_; }
  const std::map<std::string, CommunityCounts>& communities() const noexcept { return communities_; }
  bool empty() const noexcept { return communities_.empty(); }

  void add_comment(const std::string& community, std::uint64_t n = 1);
  void add_mention(const std::string& community, std::uint32_t adjective, std::uint64_t count = 1);

  // Associative and commutative; requires the same lexicon.
  void merge(const MentionCounts& other);

  std::uint64_t adjective_total(std::uint32_t adjective) const;
  // Throws Error{invalid_argument} if a total_mentions sum is inconsistent.
  void check_consistency() const;

  friend bool operator==(const MentionCounts&, const MentionCounts&) = default;

 private:
  std::vector<std::string> lexicon_;
  std::map<std::string, CommunityCounts> communities_;
};

struct ScanOptions {
  std::uint64_t cap = 1'000'000;
  // Case-folded community names; empty means no filter.
  std::vector<std::string> community_filter;
  // By default the cap counts parsed records before filtering.
  bool cap_after_filter = false;
  CountMode count_mode = CountMode::tokens;
  MatchStrategy strategy = MatchStrategy::automaton;
  FieldNames fields;
  unsigned threads = 1;
  std::size_t batch_size = 4096;
};

struct ScanStats {
  std::uint64_t lines_read = 0;
  std::uint64_t parsed = 0;
  std::uint64_t skipped_malformed = 0;
  std::uint64_t filtered_out = 0;
  std::uint64_t counted_comments = 0;
  std::uint64_t distinct_adjectives = 0;
  std::uint64_t unmatchable_entries = 0;
  bool cap_reached = false;
};

struct ScanResult {
  MentionCounts counts;
  ScanStats stats;
};

ScanResult scan(LineSource& source, const Lexicon& lexicon, const ScanOptions& options = {});

enum class ActivityMeasure { comments, mentions };

struct TopCommunities {
  std::vector<std::string> names;
  // Set when fewer than the requested number of communities exist.
  bool short_of_request = false;
};

// Most active communities, descending; ties lexicographic.
TopCommunities top_communities(const MentionCounts& counts, std::size_t n = 10,
                               ActivityMeasure measure = ActivityMeasure::comments);

// Adjectives seen at least once anywhere, in original lexicon order.
Lexicon found_vocabulary(const MentionCounts& counts);

std::string serialize_mention_counts(const MentionCounts& counts);
MentionCounts parse_mention_counts(std::string_view text);

}  // namespace perslex
