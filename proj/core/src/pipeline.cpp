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

#include "perslex/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>

#include <json.hpp>

#include "io_util.hpp"
#include "perslex/digest.hpp"
#include "perslex/error.hpp"
#include "perslex/lexicon.hpp"
#include "perslex/text.hpp"
#include "perslex/version.hpp"

namespace perslex {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void bad_setting(std::string_view key, std::string_view value, std::string_view expected) {
  throw Error(Errc::config, "invalid value '" + std::string(value) + "' for " + std::string(key) + " (expected " +
                                std::string(expected) + ")");
}

std::uint64_t to_uint(std::string_view key, std::string_view value) {
  value = text::trim_ascii(value);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty()) {
    bad_setting(key, value, "a non-negative integer");
  }
  return v;
}

bool to_bool(std::string_view key, std::string_view value) {
  value = text::trim_ascii(value);
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  bad_setting(key, value, "true|false");
}

std::string_view to_string(CountMode m) { return m == CountMode::tokens ? "tokens" : "comments"; }
std::string_view to_string(CohesionSpace s) { return s == CohesionSpace::original ? "original" : "standardized"; }
std::string_view to_string(ActivityMeasure m) { return m == ActivityMeasure::comments ? "comments" : "mentions"; }
std::string_view to_string(MatchPolicy p) { return p == MatchPolicy::nearest_only ? "nearest" : "greedy"; }

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

void apply_setting(RunConfig& c, std::string_view key_in, std::string_view value_in) {
  std::string key(text::trim_ascii(key_in));
  std::replace(key.begin(), key.end(), '-', '_');
  std::string_view value = text::trim_ascii(value_in);
  if (key == "lexicon") c.lexicon = value;
  else if (key == "vectors") c.vectors = value;
  else if (key == "ipip_vectors") c.ipip_vectors = value;
  else if (key == "corpus") c.corpus = value;
  else if (key == "ipip") c.ipip = value;
  else if (key == "markers") c.markers = value;
  else if (key == "out") c.out = value;
  else if (key == "seed") c.seed = to_uint(key, value);
  else if (key == "k") c.k = to_uint(key, value);
  else if (key == "ipip_k") c.ipip_k = to_uint(key, value);
  else if (key == "scan") c.scan = to_bool(key, value);
  else if (key == "scan_kmin") c.scan_kmin = to_uint(key, value);
  else if (key == "scan_kmax") c.scan_kmax = to_uint(key, value);
  else if (key == "n_init") c.n_init = to_uint(key, value);
  else if (key == "max_iter") c.max_iter = to_uint(key, value);
  else if (key == "cap") c.cap = to_uint(key, value);
  else if (key == "cap_after_filter") c.cap_after_filter = to_bool(key, value);
  else if (key == "top") c.top = to_uint(key, value);
  else if (key == "top_by") {
    if (value == "comments") c.top_by = ActivityMeasure::comments;
    else if (value == "mentions") c.top_by = ActivityMeasure::mentions;
    else bad_setting(key, value, "comments|mentions");
  } else if (key == "community_filter" || key == "communities") {
    c.community_filter.clear();
    for (auto part : text::split(value, ',')) {
      std::string name = community_key(part);
      if (!name.empty()) c.community_filter.push_back(std::move(name));
    }
    std::sort(c.community_filter.begin(), c.community_filter.end());
    c.community_filter.erase(std::unique(c.community_filter.begin(), c.community_filter.end()),
                             c.community_filter.end());
  } else if (key == "field_id") c.field_id = value;
  else if (key == "field_subreddit") c.field_subreddit = value;
  else if (key == "field_body") c.field_body = value;
  else if (key == "metric") {
    if (value == "cosine") c.metric = AssignMetric::cosine;
    else if (value == "euclidean") c.metric = AssignMetric::euclidean;
    else bad_setting(key, value, "cosine|euclidean");
  } else if (key == "count_mode") {
    if (value == "tokens") c.count_mode = CountMode::tokens;
    else if (value == "comments") c.count_mode = CountMode::comments;
    else bad_setting(key, value, "tokens|comments");
  } else if (key == "cohesion_space") {
    if (value == "original") c.cohesion_space = CohesionSpace::original;
    else if (value == "standardized") c.cohesion_space = CohesionSpace::standardized;
    else bad_setting(key, value, "original|standardized");
  } else if (key == "bigfive_space") {
    if (value == "original") c.bigfive_space = ModelSpace::original;
    else if (value == "standardized") c.bigfive_space = ModelSpace::standardized;
    else bad_setting(key, value, "original|standardized");
  } else if (key == "trait_match") {
    if (value == "nearest") c.trait_match = MatchPolicy::nearest_only;
    else if (value == "greedy") c.trait_match = MatchPolicy::greedy;
    else bad_setting(key, value, "nearest|greedy");
  } else if (key == "representative_n") c.representative_n = to_uint(key, value);
  else if (key == "nearest_n") c.nearest_n = to_uint(key, value);
  else if (key == "plot_data") c.plot_data = to_bool(key, value);
  else if (key == "threads") c.threads = static_cast<unsigned>(to_uint(key, value));
  else throw Error(Errc::config, "unknown setting '" + key + "'");
}

void apply_config_text(RunConfig& config, std::string_view contents, const fs::path& base_dir) {
  static constexpr std::string_view kPathKeys[] = {"lexicon", "vectors", "ipip_vectors", "ipip-vectors", "corpus",
                                                   "ipip",    "markers", "out"};
  std::size_t line_no = 0;
  for (std::string_view line : text::split(contents, '\n')) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim_ascii(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::config, "config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string_view key = text::trim_ascii(line.substr(0, eq));
    std::string value(text::trim_ascii(line.substr(eq + 1)));
    const bool is_path = std::find(std::begin(kPathKeys), std::end(kPathKeys), key) != std::end(kPathKeys);
    if (is_path && !base_dir.empty() && !value.empty() && fs::path(value).is_relative()) {
      value = (base_dir / value).lexically_normal().string();
    }
    apply_setting(config, key, value);
  }
}

void apply_config_file(RunConfig& config, const fs::path& path) {
  std::string contents;
  try {
    contents = detail::read_file(path);
  } catch (const Error&) {
    throw Error(Errc::missing_input, "config file not readable: " + path.string());
  }
  apply_config_text(config, contents, path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

void validate_config(const RunConfig& c) {
  if (c.k < 1) throw Error(Errc::config, "k must be >= 1");
  if (c.ipip_k < 1) throw Error(Errc::config, "ipip_k must be >= 1");
  if (c.cap < 1) throw Error(Errc::config, "cap must be >= 1");
  if (c.top < 1) throw Error(Errc::config, "top must be >= 1");
  if (c.n_init < 1) throw Error(Errc::config, "n_init must be >= 1");
  if (c.max_iter < 1) throw Error(Errc::config, "max_iter must be >= 1");
  if (c.scan && (c.scan_kmin < 2 || c.scan_kmin > c.scan_kmax)) {
    throw Error(Errc::config, "scan range must satisfy 2 <= scan_kmin <= scan_kmax");
  }
  if (c.representative_n < 1 || c.nearest_n < 1) throw Error(Errc::config, "list sizes must be >= 1");
}

std::string serialize_config(const RunConfig& c) {
  std::map<std::string, std::string> kv = {
      {"lexicon", c.lexicon.string()},
      {"vectors", c.vectors.string()},
      {"ipip_vectors", c.ipip_vectors.string()},
      {"corpus", c.corpus.string()},
      {"ipip", c.ipip.string()},
      {"markers", c.markers.string()},
      {"seed", std::to_string(c.seed)},
      {"k", std::to_string(c.k)},
      {"ipip_k", std::to_string(c.ipip_k)},
      {"scan", c.scan ? "true" : "false"},
      {"scan_kmin", std::to_string(c.scan_kmin)},
      {"scan_kmax", std::to_string(c.scan_kmax)},
      {"n_init", std::to_string(c.n_init)},
      {"max_iter", std::to_string(c.max_iter)},
      {"cap", std::to_string(c.cap)},
      {"cap_after_filter", c.cap_after_filter ? "true" : "false"},
      {"top", std::to_string(c.top)},
      {"top_by", std::string(to_string(c.top_by))},
      {"community_filter", join(c.community_filter, ",")},
      {"field_id", c.field_id},
      {"field_subreddit", c.field_subreddit},
      {"field_body", c.field_body},
      {"metric", std::string(to_string(c.metric))},
      {"count_mode", std::string(to_string(c.count_mode))},
      {"cohesion_space", std::string(to_string(c.cohesion_space))},
      {"bigfive_space", std::string(to_string(c.bigfive_space))},
      {"trait_match", std::string(to_string(c.trait_match))},
      {"representative_n", std::to_string(c.representative_n)},
      {"nearest_n", std::to_string(c.nearest_n)},
      {"plot_data", c.plot_data ? "true" : "false"},
  };
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::string config_digest(const RunConfig& config) { return sha256_hex(serialize_config(config)); }

namespace {

// Collects a stage's artifacts in a staging directory and moves them into
// place only after the stage succeeded.
class StageWriter {
 public:
  StageWriter(const RunConfig& config, std::string stage)
      : config_(config), stage_(std::move(stage)), digest_(config_digest(config)) {
    fs::create_directories(config.out);
    staging_ = config.out / (".staging-" + stage_);
    fs::remove_all(staging_);
    fs::create_directories(staging_);
  }

  ~StageWriter() {
    std::error_code ec;
    fs::remove_all(staging_, ec);
  }

  StageWriter(const StageWriter&) = delete;
  StageWriter& operator=(const StageWriter&) = delete;

  const std::string& digest() const noexcept { return digest_; }

  // Records the digest of an input file the stage read. Artifacts of earlier
  // stages are listed by file name so the manifest does not depend on --out.
  void input(const std::string& role, const fs::path& path, bool in_out_dir = false) {
    inputs_[role] = {{"path", in_out_dir ? path.filename().string() : path.string()}, {"sha256", sha256_file(path)}};
  }

  void text(const std::string& name, const std::string& body) {
    write(name, "# config-digest: " + digest_ + "\n" + body);
  }

  void json_doc(const std::string& name, json doc) {
    doc["config_digest"] = digest_;
    doc["stage"] = stage_;
    write(name, doc.dump(2) + "\n");
  }

  std::vector<std::string> commit() {
    write("config.txt", "# config-digest: " + digest_ + "\n" + serialize_config(config_));
    json manifest;
    manifest["tool"] = "perslex";
    manifest["version"] = kVersion;
    manifest["stage"] = stage_;
    manifest["config_digest"] = digest_;
    manifest["seed"] = config_.seed;
    manifest["inputs"] = inputs_;
    manifest["artifacts"] = artifacts_;
    const std::string manifest_name = "manifest-" + stage_ + ".json";
    write(manifest_name, manifest.dump(2) + "\n");
    std::vector<std::string> names;
    for (const auto& [name, sha] : artifacts_.items()) names.push_back(name);
    names.push_back(manifest_name);
    for (const auto& name : names) fs::rename(staging_ / name, config_.out / name);
    return names;
  }

 private:
  void write(const std::string& name, const std::string& contents) {
    detail::write_file_atomic(staging_ / name, contents);
    if (name.rfind("manifest-", 0) != 0) artifacts_[name] = sha256_hex(contents);
  }

  const RunConfig& config_;
  std::string stage_;
  std::string digest_;
  fs::path staging_;
  json inputs_ = json::object();
  json artifacts_ = json::object();
};

fs::path require_input(StageWriter& w, const fs::path& path, const std::string& role) {
  if (path.empty()) throw Error(Errc::missing_input, role + " path not configured (--" + role + ")");
  if (!fs::is_regular_file(path)) throw Error(Errc::missing_input, role + " file not found: " + path.string());
  w.input(role, path);
  return path;
}

fs::path require_artifact(StageWriter& w, const RunConfig& c, const std::string& name, std::string_view producer) {
  fs::path p = c.out / name;
  if (!fs::is_regular_file(p)) {
    throw Error(Errc::missing_input, name + " not found in " + c.out.string() + "; run `" + std::string(producer) +
                                         "` first");
  }
  w.input(name, p, true);
  return p;
}

KMeansOptions kmeans_options(const RunConfig& c) {
  KMeansOptions o;
  o.n_init = c.n_init;
  o.max_iter = c.max_iter;
  o.threads = std::max(1u, c.threads);
  return o;
}

ClusterModelOptions cluster_options(const RunConfig& c) {
  ClusterModelOptions o;
  o.k = c.k;
  o.seed = c.seed;
  o.kmeans = kmeans_options(c);
  o.representative_n = c.representative_n;
  o.cohesion_space = c.cohesion_space;
  return o;
}

std::string fmt_real(double v) { return std::isnan(v) ? "nan" : text::format_real(v); }

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string plot_csv(const std::vector<PlotPoint>& points) {
  std::string out = "# projection: first two principal components of the standardized embeddings\nid,x,y,cluster\n";
  for (const auto& p : points) {
    std::string id = p.id;
    if (id.find_first_of(",\"") != std::string::npos) {
      std::string quoted = "\"";
      for (char ch : id) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      id = quoted + "\"";
    }
    out += id + "," + text::format_real(p.x) + "," + text::format_real(p.y) + "," + std::to_string(p.cluster) + "\n";
  }
  return out;
}

// Writes <prefix>_{scan.tsv,clusters.txt,model.txt,quality.tsv[,plot.csv]}
// and returns the summary block for the stage's JSON report.
json write_cluster_build(StageWriter& w, const RunConfig& c, const std::string& prefix, const ClusterBuild& b,
                         std::ostream& log) {
  json summary;
  if (c.scan) {
    const std::size_t kmax = std::min(c.scan_kmax, b.scaled.size());
    if (c.scan_kmin <= kmax) {
      log << "  silhouette scan k=" << c.scan_kmin << ".." << kmax << " over " << b.scaled.size() << " points\n";
      KScanResult scan = scan_k(b.scaled, c.scan_kmin, kmax, c.seed, kmeans_options(c));
      std::string tsv = "# recommended_k: " + std::to_string(scan.recommended_k) + "\nk\tsilhouette\tinertia\n";
      for (const auto& row : scan.rows) {
        tsv += std::to_string(row.k) + "\t" + fmt_real(row.silhouette) + "\t" + fmt_real(row.inertia) + "\n";
        summary["scan"].push_back({{"k", row.k}, {"silhouette", row.silhouette}, {"inertia", row.inertia}});
      }
      summary["recommended_k"] = scan.recommended_k;
      w.text(prefix + "_scan.tsv", tsv);
    } else {
      summary["scan_skipped"] = "fewer points than scan_kmin";
    }
  }
  w.text(prefix + "_clusters.txt", serialize_cluster_model(b.clusters));
  w.text(prefix + "_model.txt", serialize_concept_model(b.model));

  std::string quality = "cluster\tsize\tcohesion\trepresentative\n";
  std::size_t most_cohesive = 0;
  for (std::size_t cl = 0; cl < b.clusters.k; ++cl) {
    std::vector<std::string> words;
    for (const auto& r : b.quality.representative_words[cl]) words.push_back(r.id);
    quality += b.model.concepts[cl].label + "\t" + std::to_string(b.quality.sizes[cl]) + "\t" +
               fmt_real(b.quality.cohesion_per_cluster[cl]) + "\t" + join(words, ",") + "\n";
    summary["clusters"].push_back({{"label", b.model.concepts[cl].label},
                                   {"size", b.quality.sizes[cl]},
                                   {"cohesion", nullable(b.quality.cohesion_per_cluster[cl])},
                                   {"representative", words}});
    if (b.quality.cohesion_per_cluster[cl] > b.quality.cohesion_per_cluster[most_cohesive]) most_cohesive = cl;
  }
  w.text(prefix + "_quality.tsv", quality);
  if (c.plot_data) w.text(prefix + "_plot.csv", plot_csv(project_2d(b.scaled, b.clusters.assignment)));

  MemberAgreement agreement = member_agreement(b.model, b.vectors, c.metric);
  summary["k"] = b.clusters.k;
  summary["points"] = b.clusters.assignment.size();
  summary["inertia"] = b.clusters.inertia;
  summary["iterations"] = b.clusters.iterations_run;
  summary["converged"] = b.clusters.converged;
  summary["silhouette"] = nullable(b.quality.silhouette);
  summary["most_cohesive"] = b.model.concepts[most_cohesive].label;
  summary["missing_embeddings"] = b.missing.size();
  summary["member_rule_disagreement_rate"] = agreement.rate();
  log << "  " << prefix << ": k=" << b.clusters.k << " n=" << b.clusters.assignment.size()
      << " inertia=" << b.clusters.inertia << " most cohesive " << b.model.concepts[most_cohesive].label << " ("
      << b.quality.cohesion_per_cluster[most_cohesive] << ")\n";
  return summary;
}

std::vector<std::string> stage_cluster_lexicon(const RunConfig& c, std::ostream& log) {
  StageWriter w(c, "cluster-lexicon");
  Lexicon lexicon = load_adjectives(require_input(w, c.lexicon, "lexicon"));
  VectorSet vectors = load_vectors(require_input(w, c.vectors, "vectors"));
  log << "  lexicon " << lexicon.size() << " words, vectors " << vectors.size() << " x " << vectors.dim() << "\n";
  ClusterBuild lexical = build_lexical_model(vectors, lexicon, cluster_options(c));
  json doc;
  doc["lexical"] = write_cluster_build(w, c, "lexical", lexical, log);
  doc["lexicon_size"] = lexicon.size();
  w.json_doc("cluster_lexicon.json", doc);
  return w.commit();
}

std::vector<std::string> stage_scan_corpus(const RunConfig& c, std::ostream& log) {
  StageWriter w(c, "scan-corpus");
  LexiconLoadReport lex_report;
  Lexicon lexicon = load_adjectives(require_input(w, c.lexicon, "lexicon"), &lex_report);
  auto source = open_line_source(require_input(w, c.corpus, "corpus"));
  ScanOptions opts;
  opts.cap = c.cap;
  opts.community_filter = c.community_filter;
  opts.cap_after_filter = c.cap_after_filter;
  opts.count_mode = c.count_mode;
  opts.fields = {c.field_id, c.field_subreddit, c.field_body};
  opts.threads = std::max(1u, c.threads);
  ScanResult result = scan(*source, lexicon, opts);
  const ScanStats& s = result.stats;
  log << "  scanned " << s.counted_comments << " comments (" << s.skipped_malformed << " malformed, "
      << s.filtered_out << " filtered), " << s.distinct_adjectives << " of " << lexicon.size()
      << " adjectives found\n";
  if (result.counts.empty()) throw Error(Errc::empty_input, "no comments were counted");

  Lexicon found = found_vocabulary(result.counts);
  TopCommunities top = top_communities(result.counts, c.top, c.top_by);
  w.text("mention_counts.tsv", serialize_mention_counts(result.counts));
  w.text("found_vocabulary.txt", serialize_lexicon(found));
  std::string top_tsv = "rank\tcommunity\tcomments\tmentions\n";
  for (std::size_t i = 0; i < top.names.size(); ++i) {
    const auto& cc = result.counts.communities().at(top.names[i]);
    top_tsv += std::to_string(i + 1) + "\t" + top.names[i] + "\t" + std::to_string(cc.comment_count) + "\t" +
               std::to_string(cc.total_mentions) + "\n";
  }
  w.text("top_communities.tsv", top_tsv);

  json doc;
  doc["lines_read"] = s.lines_read;
  doc["parsed"] = s.parsed;
  doc["skipped_malformed"] = s.skipped_malformed;
  doc["filtered_out"] = s.filtered_out;
  doc["counted_comments"] = s.counted_comments;
  doc["cap"] = c.cap;
  doc["cap_reached"] = s.cap_reached;
  doc["lexicon_size"] = lexicon.size();
  doc["lexicon_duplicates"] = lex_report.duplicates;
  doc["unmatchable_entries"] = s.unmatchable_entries;
  doc["distinct_adjectives_found"] = s.distinct_adjectives;
  doc["found_vocabulary_empty"] = found.empty();
  doc["communities"] = result.counts.communities().size();
  doc["top_communities"] = top.names;
  doc["top_short_of_request"] = top.short_of_request;
  w.json_doc("scan_stats.json", doc);
  return w.commit();
}

MentionCounts load_counts(StageWriter& w, const RunConfig& c) {
  return parse_mention_counts(detail::read_file(require_artifact(w, c, "mention_counts.tsv", "scan-corpus")));
}

std::vector<std::string> stage_build_models(const RunConfig& c, std::ostream& log) {
  StageWriter w(c, "build-models");
  Lexicon lexicon = load_adjectives(require_input(w, c.lexicon, "lexicon"));
  VectorSet vectors = load_vectors(require_input(w, c.vectors, "vectors"));
  MarkerSet markers = load_markers(require_input(w, c.markers, "markers"));
  MentionCounts counts = load_counts(w, c);
  Lexicon found = found_vocabulary(counts);

  json doc;
  log << "  lexical model over " << lexicon.size() << " adjectives\n";
  ClusterBuild lexical = build_lexical_model(vectors, lexicon, cluster_options(c));
  doc["lexical"] = write_cluster_build(w, c, "lexical", lexical, log);

  log << "  contextual model over " << found.size() << " corpus-found adjectives\n";
  ClusterBuild contextual = build_contextual_model(vectors, found, cluster_options(c));
  doc["contextual"] = write_cluster_build(w, c, "contextual", contextual, log);

  BigFiveOptions bf;
  bf.space = c.bigfive_space;
  if (bf.space == ModelSpace::standardized) bf.scaling = lexical.scaled.scaling;
  BigFiveBuild bigfive = build_bigfive_model(vectors, markers, bf);
  w.text("bigfive_model.txt", serialize_concept_model(bigfive.model));
  json bsum;
  for (const auto& con : bigfive.model.concepts) bsum["markers"][con.label] = con.members;
  bsum["marker_total"] = markers.total();
  bsum["unresolved_markers"] = bigfive.unresolved;
  bsum["markers_not_in_lexicon"] = missing_markers(markers, lexicon);
  bsum["space"] = to_string(bigfive.model.space);
  doc["bigfive"] = bsum;
  if (!bigfive.unresolved.empty()) {
    log << "  warning: " << bigfive.unresolved.size() << " marker(s) without an embedding\n";
  }
  w.json_doc("models.json", doc);
  return w.commit();
}

struct LoadedModels {
  ConceptModel lexical;
  ConceptModel contextual;
  ConceptModel bigfive;

  std::vector<const ConceptModel*> all() const { return {&lexical, &contextual, &bigfive}; }
};

LoadedModels load_models(StageWriter& w, const RunConfig& c) {
  auto load = [&](const std::string& name) {
    return parse_concept_model(detail::read_file(require_artifact(w, c, name, "build-models")));
  };
  return {load("lexical_model.txt"), load("contextual_model.txt"), load("bigfive_model.txt")};
}

std::vector<std::string> stage_profile(const RunConfig& c, std::ostream& log) {
  StageWriter w(c, "profile");
  MentionCounts counts = load_counts(w, c);
  LoadedModels models = load_models(w, c);
  VectorSet vectors = load_vectors(require_input(w, c.vectors, "vectors"));
  TopCommunities top = top_communities(counts, c.top, c.top_by);
  json doc;
  doc["communities"] = top.names;
  for (const ConceptModel* m : models.all()) {
    Profile p = profile(counts, *m, vectors, top.names, c.metric);
    std::string tsv = "community\t" + join(p.labels, "\t") + "\ttotal_mentions\n";
    json rows = json::array();
    for (const auto& row : p.rows) {
      tsv += row.community;
      for (double pct : row.percent) tsv += "\t" + text::format_real(pct);
      tsv += "\t" + std::to_string(row.total) + "\n";
      const auto dominant = std::max_element(row.percent.begin(), row.percent.end());
      rows.push_back({{"community", row.community},
                      {"percent", row.percent},
                      {"total", row.total},
                      {"dominant", p.labels[static_cast<std::size_t>(dominant - row.percent.begin())]},
                      {"dominant_percent", *dominant}});
    }
    w.text("profile_" + m->name + ".tsv", tsv);
    doc["models"][m->name] = {{"labels", p.labels},
                              {"rows", rows},
                              {"empty_communities", p.empty_communities},
                              {"unresolved_adjectives", p.unresolved.size()}};
    log << "  profile " << m->name << ": " << p.rows.size() << " communities\n";
  }
  w.json_doc("profiles.json", doc);
  return w.commit();
}

std::vector<std::string> stage_validate_ipip(const RunConfig& c, std::ostream& log) {
  StageWriter w(c, "validate-ipip");
  IpipLoadReport report;
  std::vector<IpipItem> items = load_ipip(require_input(w, c.ipip, "ipip"), &report);
  const fs::path& item_vectors_path = c.ipip_vectors.empty() ? c.vectors : c.ipip_vectors;
  VectorSet item_vectors = load_vectors(require_input(w, item_vectors_path, "ipip-vectors"));
  LoadedModels models = load_models(w, c);
  for (const auto& warning : report.warnings) log << "  warning: " << warning << "\n";
  std::vector<std::string> missing;
  EmbeddedItems embedded = embed_items(items, item_vectors, &missing);
  if (embedded.size() == 0) throw Error(Errc::missing_input, "no IPIP item has an embedding");
  log << "  " << embedded.size() << " of " << items.size() << " items embedded\n";

  json doc;
  doc["items"] = items.size();
  doc["embedded_items"] = embedded.size();
  doc["rejected_rows"] = report.rejected.size();
  doc["warnings"] = report.warnings;
  std::string scores = "model\tfit_score\titems\n";
  std::string detail_rows = "model\titem\tconcept\tsimilarity\n";
  std::string nearest_rows = "model\tconcept\trank\titem\tsimilarity\n";
  for (const ConceptModel* m : models.all()) {
    FitReport fit = fit_score(*m, embedded);
    scores += m->name + "\t" + text::format_real(fit.score) + "\t" + std::to_string(fit.rows.size()) + "\n";
    for (const auto& row : fit.rows) {
      detail_rows += m->name + "\t" + row.item + "\t" + m->concepts[row.concept_index].label + "\t" +
                     text::format_real(row.similarity) + "\n";
    }
    auto nearest = nearest_items(*m, embedded, c.nearest_n);
    json near_doc;
    for (std::size_t ci = 0; ci < nearest.size(); ++ci) {
      std::vector<std::string> texts;
      for (std::size_t r = 0; r < nearest[ci].size(); ++r) {
        nearest_rows += m->name + "\t" + m->concepts[ci].label + "\t" + std::to_string(r + 1) + "\t" +
                        nearest[ci][r].id + "\t" + text::format_real(nearest[ci][r].similarity) + "\n";
        texts.push_back(nearest[ci][r].id);
      }
      near_doc[m->concepts[ci].label] = texts;
    }
    doc["fit_scores"][m->name] = fit.score;
    doc["nearest_items"][m->name] = near_doc;
    log << "  fit score " << m->name << " = " << fit.score << "\n";
  }
  w.text("fit_scores.tsv", scores);
  w.text("fit_items.tsv", detail_rows);
  w.text("nearest_items.tsv", nearest_rows);

  ItemClustering ipip = cluster_items(embedded, c.ipip_k, c.seed, kmeans_options(c));
  w.text("ipip_clusters.txt", serialize_cluster_model(ipip.clusters));
  TraitMapping mapping = map_clusters_to_traits(ipip.original_centroids, models.bigfive, c.trait_match);
  std::string map_tsv = "cluster\tsize\tmatched_trait\tsimilarity";
  for (Trait t : kTraits) map_tsv += std::string("\tsim_") + trait_code(t);
  map_tsv += "\trepresentative\n";
  const auto members = ipip.clusters.members();
  for (std::size_t cl = 0; cl < ipip.clusters.k; ++cl) {
    std::vector<RankedId> ranked;
    for (std::size_t i : members[cl]) {
      ranked.push_back({embedded.texts[i], cosine(embedded.vectors.row(i), ipip.original_centroids.row(cl))});
    }
    std::sort(ranked.begin(), ranked.end(), [](const RankedId& a, const RankedId& b) {
      return a.similarity != b.similarity ? a.similarity > b.similarity : a.id < b.id;
    });
    std::vector<std::string> rep;
    for (std::size_t r = 0; r < std::min(c.representative_n, ranked.size()); ++r) rep.push_back(ranked[r].id);
    const auto& trait = mapping.cluster_trait[cl];
    map_tsv += std::to_string(cl) + "\t" + std::to_string(members[cl].size()) + "\t" +
               (trait ? std::string(1, trait_code(*trait)) : std::string("-")) + "\t" +
               fmt_real(mapping.cluster_similarity[cl]);
    for (std::size_t t = 0; t < kTraits.size(); ++t) map_tsv += "\t" + text::format_real(mapping.similarity(cl, t));
    map_tsv += "\t" + join(rep, " | ") + "\n";
    json entry = {{"cluster", cl},
                  {"size", members[cl].size()},
                  {"trait", trait ? json(std::string(1, trait_code(*trait))) : json(nullptr)},
                  {"similarity", nullable(mapping.cluster_similarity[cl])},
                  {"representative", rep}};
    doc["ipip_clusters"].push_back(entry);
  }
  w.text("trait_mapping.tsv", map_tsv);
  std::vector<std::string> unmatched;
  for (Trait t : mapping.unmatched_traits) unmatched.emplace_back(1, trait_code(t));
  doc["unmatched_traits"] = unmatched;
  doc["missing_item_embeddings"] = missing.size();
  if (c.plot_data) w.text("ipip_plot.csv", plot_csv(project_2d(ipip.scaled, ipip.clusters.assignment)));
  log << "  unmatched traits: " << (unmatched.empty() ? "none" : join(unmatched, ",")) << "\n";
  w.json_doc("validation.json", doc);
  return w.commit();
}

json read_json_artifact(StageWriter& w, const RunConfig& c, const std::string& name, std::string_view producer) {
  auto doc = json::parse(detail::read_file(require_artifact(w, c, name, producer)), nullptr, false);
  if (doc.is_discarded()) throw Error(Errc::parse, name + " is not valid JSON");
  return doc;
}

std::vector<std::string> stage_report(const RunConfig& c, std::ostream& log) {
  StageWriter w(c, "report");
  json scan = read_json_artifact(w, c, "scan_stats.json", "scan-corpus");
  json models = read_json_artifact(w, c, "models.json", "build-models");
  json profiles = read_json_artifact(w, c, "profiles.json", "profile");
  json validation = read_json_artifact(w, c, "validation.json", "validate-ipip");

  json report;
  report["corpus"] = {{"counted_comments", scan["counted_comments"]},
                      {"distinct_adjectives_found", scan["distinct_adjectives_found"]},
                      {"lexicon_size", scan["lexicon_size"]},
                      {"top_communities", scan["top_communities"]}};
  std::string table = "model\tconcepts\tfit_score\tmean_dominant_percent\tcommunities_dominant_over_80\n";
  std::vector<std::pair<double, std::string>> ranking;
  for (const std::string name : {"lexical", "contextual", "bigfive"}) {
    const json& prof = profiles["models"][name];
    double mean_dom = 0.0;
    std::size_t over80 = 0;
    for (const auto& row : prof["rows"]) {
      double d = row["dominant_percent"].get<double>();
      mean_dom += d;
      if (d > 80.0) ++over80;
    }
    const std::size_t rows = prof["rows"].size();
    if (rows) mean_dom /= static_cast<double>(rows);
    const double fit = validation["fit_scores"][name].get<double>();
    ranking.emplace_back(fit, name);
    table += name + "\t" + std::to_string(prof["labels"].size()) + "\t" + text::format_real(fit) + "\t" +
             text::format_real(mean_dom) + "\t" + std::to_string(over80) + "/" + std::to_string(rows) + "\n";
    report["models"][name] = {{"fit_score", fit},
                              {"concepts", prof["labels"]},
                              {"mean_dominant_percent", mean_dom},
                              {"communities_dominant_over_80", over80},
                              {"profiled_communities", rows}};
  }
  std::stable_sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::string> order;
  for (const auto& r : ranking) order.push_back(r.second);
  report["fit_ordering"] = order;
  if (models.contains("lexical")) {
    report["lexical_most_cohesive"] = models["lexical"]["most_cohesive"];
    for (const auto& cl : models["lexical"]["clusters"]) {
      if (cl["label"] == models["lexical"]["most_cohesive"]) report["lexical_most_cohesive_cluster"] = cl;
    }
  }
  report["ipip_clusters"] = validation["ipip_clusters"];
  report["unmatched_traits"] = validation["unmatched_traits"];
  w.text("model_comparison.tsv", table);
  w.json_doc("report.json", report);
  log << "  fit ordering: " << join(order, " > ") << "\n";
  return w.commit();
}

using StageFn = std::function<std::vector<std::string>(const RunConfig&, std::ostream&)>;

const std::map<std::string_view, StageFn>& stages() {
  static const std::map<std::string_view, StageFn> table = {
      {"cluster-lexicon", stage_cluster_lexicon}, {"scan-corpus", stage_scan_corpus},
      {"build-models", stage_build_models},       {"profile", stage_profile},
      {"validate-ipip", stage_validate_ipip},     {"report", stage_report},
  };
  return table;
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::missing_input: return kExitMissingInput;
    case Errc::config: return kExitConfig;
    default: return kExitFailure;
  }
}

}  // namespace

RunOutcome run_subcommand(std::string_view name, const RunConfig& config, std::ostream& log) {
  RunOutcome outcome;
  std::vector<std::string_view> order;
  if (name == "all") {
    order = {"scan-corpus", "build-models", "profile", "validate-ipip", "report"};
  } else if (stages().contains(name)) {
    order = {name};
  } else {
    outcome.exit_code = kExitConfig;
    outcome.message = "unknown subcommand '" + std::string(name) + "'";
    return outcome;
  }
  try {
    validate_config(config);
    for (std::string_view stage : order) {
      log << "[" << stage << "]\n";
      auto written = stages().at(stage)(config, log);
      outcome.artifacts.insert(outcome.artifacts.end(), written.begin(), written.end());
    }
  } catch (const Error& e) {
    outcome.exit_code = exit_code_for(e.code());
    outcome.message = e.what();
  } catch (const std::exception& e) {
    outcome.exit_code = kExitFailure;
    outcome.message = e.what();
  }
  return outcome;
}

}  // namespace perslex
