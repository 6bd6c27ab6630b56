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

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "perslex/error.hpp"
#include "perslex/pipeline.hpp"
#include "perslex/version.hpp"

namespace {

const std::pair<std::string_view, const char*> kDescriptions[] = {
    {"cluster-lexicon", "standardize and cluster the adjective lexicon, with a silhouette scan"},
    {"scan-corpus", "count lexicon adjectives per community in a comment dump"},
    {"build-models", "build the lexical, contextual and Big Five concept models"},
    {"profile", "per-community concept percentages for each model"},
    {"validate-ipip", "fit scores, nearest items and trait mapping against IPIP items"},
    {"report", "combine stage outputs into a model comparison"},
    {"all", "scan-corpus, build-models, profile, validate-ipip, report"},
};

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> lexicon, vectors, ipip_vectors, corpus, ipip, markers, out;
  std::optional<std::string> seed, k, ipip_k, cap, top, metric, count_mode, threads;
  bool plot_data = false;
  bool quiet = false;
  std::vector<std::string> sets;
};

void add_flags(CLI::App& cmd, Flags& f) {
  cmd.add_option("--config", f.config, "flat key = value config file");
  cmd.add_option("--lexicon", f.lexicon, "adjective list, one per line");
  cmd.add_option("--vectors", f.vectors, "embedding file (text or binary)");
  cmd.add_option("--ipip-vectors", f.ipip_vectors, "item embedding file (defaults to --vectors)");
  cmd.add_option("--corpus", f.corpus, "comment dump (.jsonl, .gz or .zst)");
  cmd.add_option("--ipip", f.ipip, "IPIP item CSV");
  cmd.add_option("--markers", f.markers, "Big Five marker adjectives");
  cmd.add_option("--out", f.out, "output directory");
  cmd.add_option("--seed", f.seed, "random seed");
  cmd.add_option("--k", f.k, "number of adjective clusters");
  cmd.add_option("--ipip-k", f.ipip_k, "number of IPIP item clusters");
  cmd.add_option("--cap", f.cap, "maximum number of comments to count");
  cmd.add_option("--top", f.top, "number of communities to profile");
  cmd.add_option("--metric", f.metric, "assignment metric")->check(CLI::IsMember({"cosine", "euclidean"}));
  cmd.add_option("--count-mode", f.count_mode, "count occurrences or comments")
      ->check(CLI::IsMember({"tokens", "comments"}));
  cmd.add_option("--threads", f.threads, "worker threads (results do not depend on it)");
  cmd.add_flag("--plot-data", f.plot_data, "write 2-D projection coordinates");
  cmd.add_option("--set", f.sets, "override any config key: key=value")->allow_extra_args(false);
  cmd.add_flag("-q,--quiet", f.quiet, "suppress progress output");
}

perslex::RunConfig build_config(const Flags& f) {
  perslex::RunConfig c;
  if (f.config) perslex::apply_config_file(c, *f.config);
  auto set = [&](const char* key, const std::optional<std::string>& v) {
    if (v) perslex::apply_setting(c, key, *v);
  };
  set("lexicon", f.lexicon);
  set("vectors", f.vectors);
  set("ipip_vectors", f.ipip_vectors);
  set("corpus", f.corpus);
  set("ipip", f.ipip);
  set("markers", f.markers);
  set("out", f.out);
  set("seed", f.seed);
  set("k", f.k);
  set("ipip_k", f.ipip_k);
  set("cap", f.cap);
  set("top", f.top);
  set("metric", f.metric);
  set("count_mode", f.count_mode);
  set("threads", f.threads);
  if (f.plot_data) c.plot_data = true;
  for (const auto& kv : f.sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw perslex::Error(perslex::Errc::config, "--set expects key=value, got " + kv);
    perslex::apply_setting(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"perslex: personality-adjective clustering and community profiling"};
  app.set_version_flag("--version", perslex::kVersion);
  app.require_subcommand(1);
  Flags flags;
  for (const auto& [name, description] : kDescriptions) {
    add_flags(*app.add_subcommand(std::string(name), description), flags);
  }
  add_flags(*app.add_subcommand("print-config", "show the effective config and its digest"), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : perslex::kExitConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  perslex::RunConfig config;
  try {
    config = build_config(flags);
  } catch (const perslex::Error& e) {
    std::cerr << "perslex: " << e.what() << "\n";
    return e.code() == perslex::Errc::missing_input ? perslex::kExitMissingInput : perslex::kExitConfig;
  }

  if (name == "print-config") {
    std::cout << "# config-digest: " << perslex::config_digest(config) << "\n" << perslex::serialize_config(config);
    return 0;
  }

  std::ostream null_stream(nullptr);
  perslex::RunOutcome outcome = perslex::run_subcommand(name, config, flags.quiet ? null_stream : std::cerr);
  if (outcome.exit_code != perslex::kExitOk) {
    std::cerr << "perslex " << name << ": " << outcome.message << "\n";
    return outcome.exit_code;
  }
  if (!flags.quiet) {
    std::cerr << "wrote " << outcome.artifacts.size() << " files to " << config.out.string() << "\n";
  }
  return 0;
}
