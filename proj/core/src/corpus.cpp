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

#include "perslex/corpus.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "parallel.hpp"
#include "perslex/error.hpp"
#include "perslex/text.hpp"

namespace perslex {

namespace {

constexpr std::uint32_t kDead = 0;
constexpr std::uint32_t kRoot = 1;

constexpr std::array<bool, 128> make_ascii_token_table() {
  std::array<bool, 128> t{};
  for (int c = 0; c < 128; ++c) {
    t[c] = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '\'' || c == '-';
  }
  return t;
}
constexpr auto kAsciiToken = make_ascii_token_table();

bool is_single_token(const std::string& entry) {
  auto tokens = text::tokenize(entry);
  return tokens.size() == 1 && tokens.front() == entry;
}

}  // namespace

// Byte-level trie over the normalized entries, driven directly over the
// comment text: one transition per byte inside a token, one terminal check at
// each token boundary.
struct TokenMatcher::Automaton {
  std::array<std::uint8_t, 256> byte_class{};
  std::size_t classes = 1;
  std::vector<std::uint32_t> next;
  std::vector<std::int64_t> word;
  std::size_t unmatchable = 0;

  explicit Automaton(const Lexicon& lexicon) {
    std::vector<std::size_t> matchable;
    for (std::size_t i = 0; i < lexicon.size(); ++i) {
      if (is_single_token(lexicon[i])) {
        matchable.push_back(i);
      } else {
        ++unmatchable;
      }
    }
    for (std::size_t i : matchable) {
      for (unsigned char b : lexicon[i]) {
        if (byte_class[b] == 0) byte_class[b] = static_cast<std::uint8_t>(classes++);
      }
    }
    // Node 0 is the dead state, node 1 the root.
    next.assign(2 * classes, kDead);
    word.assign(2, -1);
    for (std::size_t i : matchable) {
      std::uint32_t node = kRoot;
      for (unsigned char b : lexicon[i]) {
        std::uint32_t& slot = next[node * classes + byte_class[b]];
        if (slot == kDead) {
          slot = static_cast<std::uint32_t>(word.size());
          word.push_back(-1);
          next.resize(next.size() + classes, kDead);
        }
        node = next[node * classes + byte_class[b]];
      }
      word[node] = static_cast<std::int64_t>(i);
    }
  }

  std::uint32_t step(std::uint32_t node, unsigned char b) const {
    return node == kDead ? kDead : next[node * classes + byte_class[b]];
  }

  void emit(std::uint32_t node, std::vector<std::uint32_t>& hits) const {
    if (node != kDead && word[node] >= 0) hits.push_back(static_cast<std::uint32_t>(word[node]));
  }

  // `ascii_fold` lowercases bytes on the fly for pure-ASCII input; otherwise
  // the text must already be fold_nfc'd.
  void run(std::string_view s, bool ascii_fold, std::vector<std::uint32_t>& hits) const {
    bool in_token = false;
    std::uint32_t node = kRoot;
    std::size_t pos = 0;
    while (pos < s.size()) {
      auto c = static_cast<unsigned char>(s[pos]);
      if (c < 0x80) {
        ++pos;
        if (kAsciiToken[c]) {
          if (!in_token) {
            in_token = true;
            node = kRoot;
          }
          if (ascii_fold && c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
          node = step(node, c);
        } else if (in_token) {
          emit(node, hits);
          in_token = false;
        }
        continue;
      }
      std::size_t here = pos;
      char32_t cp = text::next_codepoint(s, pos);
      if (text::is_token_char(cp)) {
        if (!in_token) {
          in_token = true;
          node = kRoot;
        }
        for (std::size_t i = here; i < pos; ++i) node = step(node, static_cast<unsigned char>(s[i]));
      } else if (in_token) {
        emit(node, hits);
        in_token = false;
      }
    }
    if (in_token) emit(node, hits);
  }
};

struct TokenMatcher::HashSet {
  std::unordered_map<std::string, std::uint32_t> index;
  std::size_t unmatchable = 0;

  explicit HashSet(const Lexicon& lexicon) {
    for (std::size_t i = 0; i < lexicon.size(); ++i) {
      if (is_single_token(lexicon[i])) {
        index.emplace(lexicon[i], static_cast<std::uint32_t>(i));
      } else {
        ++unmatchable;
      }
    }
  }
};

TokenMatcher::TokenMatcher(const Lexicon& lexicon, MatchStrategy strategy) : strategy_(strategy) {
  if (strategy == MatchStrategy::automaton) {
    automaton_ = std::make_unique<Automaton>(lexicon);
  } else {
    hash_set_ = std::make_unique<HashSet>(lexicon);
  }
}

TokenMatcher::~TokenMatcher() = default;
TokenMatcher::TokenMatcher(TokenMatcher&&) noexcept = default;
TokenMatcher& TokenMatcher::operator=(TokenMatcher&&) noexcept = default;

void TokenMatcher::match(std::string_view body, std::vector<std::uint32_t>& hits) const {
  if (automaton_) {
    if (text::is_ascii(body)) {
      automaton_->run(body, true, hits);
    } else {
      automaton_->run(text::fold_nfc(body), false, hits);
    }
    return;
  }
  for (const auto& token : text::tokenize(body)) {
    if (auto it = hash_set_->index.find(token); it != hash_set_->index.end()) hits.push_back(it->second);
  }
}

std::size_t TokenMatcher::unmatchable() const noexcept {
  return automaton_ ? automaton_->unmatchable : hash_set_->unmatchable;
}

std::string community_key(std::string_view name) {
  std::string key = text::normalize_key(name);
  if (key.starts_with("r/")) key.erase(0, 2);
  return key;
}

std::optional<CommentRecord> parse_comment(std::string_view line, const FieldNames& fields) {
  auto doc = nlohmann::json::parse(line, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
  auto id = doc.find(fields.id);
  auto sub = doc.find(fields.subreddit);
  auto body = doc.find(fields.body);
  if (sub == doc.end() || body == doc.end()) return std::nullopt;
  if (!sub->is_string() || !body->is_string()) return std::nullopt;
  CommentRecord rec;
  // The id is only carried along; records without one are still counted.
  if (id == doc.end() || id->is_null()) {
  } else if (id->is_string()) {
    rec.id = id->get<std::string>();
  } else if (id->is_number_integer()) {
    rec.id = std::to_string(id->get<std::int64_t>());
  } else {
    return std::nullopt;
  }
  rec.subreddit = community_key(sub->get<std::string>());
  if (rec.subreddit.empty()) return std::nullopt;
  rec.body = body->get<std::string>();
  return rec;
}

void MentionCounts::add_comment(const std::string& community, std::uint64_t n) {
  communities_[community].comment_count += n;
}

void MentionCounts::add_mention(const std::string& community, std::uint32_t adjective, std::uint64_t count) {
  if (adjective >= lexicon_.size()) throw Error(Errc::invalid_argument, "adjective index out of range");
  auto& c = communities_[community];
  c.adjectives[adjective] += count;
  c.total_mentions += count;
}

void MentionCounts::merge(const MentionCounts& other) {
  if (lexicon_.empty()) lexicon_ = other.lexicon_;
  if (other.lexicon_ != lexicon_) throw Error(Errc::invalid_argument, "cannot merge counts over different lexicons");
  for (const auto& [name, theirs] : other.communities_) {
    auto& ours = communities_[name];
    ours.comment_count += theirs.comment_count;
    ours.total_mentions += theirs.total_mentions;
    for (const auto& [adj, n] : theirs.adjectives) ours.adjectives[adj] += n;
  }
}

std::uint64_t MentionCounts::adjective_total(std::uint32_t adjective) const {
  std::uint64_t total = 0;
  for (const auto& [name, c] : communities_) {
    if (auto it = c.adjectives.find(adjective); it != c.adjectives.end()) total += it->second;
  }
  return total;
}

void MentionCounts::check_consistency() const {
  for (const auto& [name, c] : communities_) {
    std::uint64_t sum = 0;
    for (const auto& [adj, n] : c.adjectives) sum += n;
    if (sum != c.total_mentions) {
      throw Error(Errc::invalid_argument, "total_mentions mismatch for community '" + name + "'");
    }
  }
}

namespace {

void count_comment(const TokenMatcher& matcher, const CommentRecord& rec, CountMode mode, MentionCounts& counts,
                   std::vector<std::uint32_t>& hits) {
  counts.add_comment(rec.subreddit);
  hits.clear();
  matcher.match(rec.body, hits);
  if (mode == CountMode::comments) {
    std::sort(hits.begin(), hits.end());
    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
  }
  for (std::uint32_t h : hits) counts.add_mention(rec.subreddit, h);
}

}  // namespace

ScanResult scan(LineSource& source, const Lexicon& lexicon, const ScanOptions& options) {
  if (options.cap < 1) throw Error(Errc::invalid_argument, "cap must be >= 1");
  const TokenMatcher matcher(lexicon, options.strategy);
  std::unordered_set<std::string> filter;
  for (const auto& f : options.community_filter) filter.insert(community_key(f));

  const std::size_t workers = std::max(1u, options.threads);
  const std::size_t batch = std::max<std::size_t>(1, options.batch_size) * workers;

  ScanResult result{MentionCounts(lexicon.entries()), {}};
  ScanStats& stats = result.stats;
  stats.unmatchable_entries = matcher.unmatchable();
  std::uint64_t capped = 0;

  std::vector<std::string> lines;
  std::vector<std::optional<CommentRecord>> parsed;
  std::vector<const CommentRecord*> selected;
  bool done = false;
  while (!done) {
    lines.clear();
    std::string line;
    while (lines.size() < batch && source.next(line)) lines.push_back(std::move(line));
    if (lines.empty()) break;
    stats.lines_read += lines.size();

    parsed.assign(lines.size(), std::nullopt);
    detail::parallel_for(lines.size(), options.threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        if (!text::trim_ascii(lines[i]).empty()) parsed[i] = parse_comment(lines[i], options.fields);
      }
    });

    // The cap and the filter are applied in stream order, single-threaded.
    selected.clear();
    for (std::size_t i = 0; i < parsed.size(); ++i) {
      if (text::trim_ascii(lines[i]).empty()) continue;
      if (!parsed[i]) {
        ++stats.skipped_malformed;
        continue;
      }
      const bool passes = filter.empty() || filter.contains(parsed[i]->subreddit);
      if (!options.cap_after_filter || passes) {
        if (capped == options.cap) {
          stats.cap_reached = true;
          done = true;
          break;
        }
        ++capped;
      }
      ++stats.parsed;
      if (!passes) {
        ++stats.filtered_out;
        continue;
      }
      selected.push_back(&*parsed[i]);
    }

    std::vector<MentionCounts> partial(workers, MentionCounts(lexicon.entries()));
    const std::size_t per_shard = (selected.size() + workers - 1) / workers;
    detail::parallel_for(workers, options.threads, [&](std::size_t begin, std::size_t end) {
      std::vector<std::uint32_t> hits;
      for (std::size_t shard = begin; shard < end; ++shard) {
        const std::size_t lo = std::min(selected.size(), shard * per_shard);
        const std::size_t hi = std::min(selected.size(), lo + per_shard);
        for (std::size_t i = lo; i < hi; ++i) {
          count_comment(matcher, *selected[i], options.count_mode, partial[shard], hits);
        }
      }
    }, 1);
    for (const auto& p : partial) result.counts.merge(p);
    stats.counted_comments += selected.size();
  }

  for (std::uint32_t i = 0; i < lexicon.size(); ++i) {
    if (result.counts.adjective_total(i) > 0) ++stats.distinct_adjectives;
  }
  result.counts.check_consistency();
  return result;
}

TopCommunities top_communities(const MentionCounts& counts, std::size_t n, ActivityMeasure measure) {
  if (counts.empty()) throw Error(Errc::empty_input, "no communities to rank");
  std::vector<std::pair<std::uint64_t, std::string>> ranked;
  for (const auto& [name, c] : counts.communities()) {
    ranked.emplace_back(measure == ActivityMeasure::comments ? c.comment_count : c.total_mentions, name);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  TopCommunities top;
  top.short_of_request = ranked.size() < n;
  for (std::size_t i = 0; i < std::min(n, ranked.size()); ++i) top.names.push_back(ranked[i].second);
  return top;
}

Lexicon found_vocabulary(const MentionCounts& counts) {
  std::vector<bool> seen(counts.lexicon().size(), false);
  for (const auto& [name, c] : counts.communities()) {
    for (const auto& [adj, n] : c.adjectives) {
      if (n > 0) seen[adj] = true;
    }
  }
  Lexicon found;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) found.add(counts.lexicon()[i]);
  }
  return found;
}

std::string serialize_mention_counts(const MentionCounts& counts) {
  std::string out = "# perslex mention-counts v1\n[lexicon]\n";
  for (const auto& w : counts.lexicon()) out += w + "\n";
  out += "[summary]\n# subreddit\tcomment_count\ttotal_mentions\n";
  for (const auto& [name, c] : counts.communities()) {
    out += name + "\t" + std::to_string(c.comment_count) + "\t" + std::to_string(c.total_mentions) + "\n";
  }
  out += "[counts]\n# subreddit\tadjective\tcount\n";
  for (const auto& [name, c] : counts.communities()) {
    for (const auto& [adj, n] : c.adjectives) {
      out += name + "\t" + counts.lexicon()[adj] + "\t" + std::to_string(n) + "\n";
    }
  }
  return out;
}

namespace {

std::uint64_t parse_count(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw Error(Errc::parse, "bad count '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

MentionCounts parse_mention_counts(std::string_view text_in) {
  enum class Section { none, lexicon, summary, counts } section = Section::none;
  std::vector<std::string> lexicon;
  std::unordered_map<std::string, std::uint32_t> index;
  std::map<std::string, CommunityCounts> communities;
  std::optional<MentionCounts> counts;
  for (std::string_view line : text::split(text_in, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (line == "[lexicon]") {
      section = Section::lexicon;
      continue;
    }
    if (line == "[summary]" || line == "[counts]") {
      if (!counts) counts.emplace(lexicon);
      section = line == "[summary]" ? Section::summary : Section::counts;
      continue;
    }
    switch (section) {
      case Section::none:
        throw Error(Errc::parse, "mention counts: data before any section");
      case Section::lexicon:
        index.emplace(std::string(line), static_cast<std::uint32_t>(lexicon.size()));
        lexicon.emplace_back(line);
        break;
      case Section::summary: {
        auto f = text::split(line, '\t');
        if (f.size() != 3) throw Error(Errc::parse, "mention counts: bad summary row");
        auto& c = communities[std::string(f[0])];
        c.comment_count = parse_count(f[1]);
        c.total_mentions = parse_count(f[2]);
        break;
      }
      case Section::counts: {
        auto f = text::split(line, '\t');
        if (f.size() != 3) throw Error(Errc::parse, "mention counts: bad count row");
        auto it = index.find(std::string(f[1]));
        if (it == index.end()) throw Error(Errc::parse, "mention counts: adjective not in lexicon");
        counts->add_mention(std::string(f[0]), it->second, parse_count(f[2]));
        break;
      }
    }
  }
  if (!counts) counts.emplace(lexicon);
  // Rebuild from rows so the summary is checked rather than trusted.
  MentionCounts out(lexicon);
  for (const auto& [name, c] : communities) {
    out.add_comment(name, c.comment_count);
  }
  out.merge(*counts);
  for (const auto& [name, c] : communities) {
    if (out.communities().at(name).total_mentions != c.total_mentions) {
      throw Error(Errc::parse, "mention counts: summary total disagrees with rows for '" + name + "'");
    }
  }
  return out;
}

}  // namespace perslex
