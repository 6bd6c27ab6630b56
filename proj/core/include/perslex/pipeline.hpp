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
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "perslex/cluster.hpp"
#include "perslex/corpus.hpp"
#include "perslex/eval.hpp"
#include "perslex/models.hpp"

namespace perslex {

// Settings for one pipeline run. Defaults are the published settings:
// k=6 for both data-driven models, k=5 for the item clustering, a one
// million comment cap and the ten most active communities.
struct RunConfig {
  std::filesystem::path lexicon;
  std::filesystem::path vectors;
  // Item embeddings; falls back to `vectors` when empty.
  std::filesystem::path ipip_vectors;
  std::filesystem::path corpus;
  std::filesystem::path ipip;
  std::filesystem::path markers;
  std::filesystem::path out = "perslex-out";

  std::uint64_t seed = 42;
  std::size_t k = 6;
  std::size_t ipip_k = 5;
  bool scan = true;
  std::size_t scan_kmin = 2;
  std::size_t scan_kmax = 10;
  std::size_t n_init = 10;
  std::size_t max_iter = 300;
  std::uint64_t cap = 1'000'000;
  bool cap_after_filter = false;
  std::size_t top = 10;
  ActivityMeasure top_by = ActivityMeasure::comments;
  std::vector<std::string> community_filter;
  std::string field_id = "id";
  std::string field_subreddit = "subreddit";
  std::string field_body = "body";
  AssignMetric metric = AssignMetric::cosine;
  CountMode count_mode = CountMode::tokens;
  CohesionSpace cohesion_space = CohesionSpace::original;
  ModelSpace bigfive_space = ModelSpace::original;
  MatchPolicy trait_match = MatchPolicy::nearest_only;
  std::size_t representative_n = 5;
  std::size_t nearest_n = 5;
  bool plot_data = false;
  unsigned threads = 1;
};

// Applies one `key=value` setting. Throws Error{config}.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

// Flat `key = value` lines; `#` starts a comment.
// Relative paths in the text are resolved against base_dir when it is set;
// apply_config_file passes the config file's directory.
void apply_config_text(RunConfig& config, std::string_view text, const std::filesystem::path& base_dir = {});
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

// Throws Error{config} for contradictory or out-of-range settings.
void validate_config(const RunConfig& config);

// Canonical sorted `key=value` text. `out` and `threads` are excluded: they
// never change results.
std::string serialize_config(const RunConfig& config);
std::string config_digest(const RunConfig& config);

inline constexpr std::string_view kSubcommands[] = {
    "cluster-lexicon", "scan-corpus", "build-models", "profile", "validate-ipip", "report", "all",
};

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitMissingInput = 3,
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::string message;
  std::vector<std::string> artifacts;
};

// Runs one stage (or `all`). Each stage writes its artifacts plus
// `manifest-<stage>.json` into config.out; on failure nothing from the
// failing stage is left behind.
RunOutcome run_subcommand(std::string_view name, const RunConfig& config, std::ostream& log);

}  // namespace perslex
