#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "perslex/digest.hpp"
#include "perslex/error.hpp"
#include "perslex/pipeline.hpp"

using namespace perslex;
namespace fs = std::filesystem;

namespace {

const fs::path kDesk = fs::path(PERSLEX_DATA_DIR) / "desk";

RunConfig desk_config(const fs::path& out) {
  RunConfig c;
  apply_config_file(c, kDesk / "desk.conf");
  c.out = out;
  return c;
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("perslex-pipeline-" + name);
  fs::remove_all(p);
  return p;
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST(Config, FileThenFlagsOverrideDefaults) {
  RunConfig c;
  EXPECT_EQ(c.k, 6u);
  EXPECT_EQ(c.ipip_k, 5u);
  EXPECT_EQ(c.cap, 1'000'000u);
  EXPECT_EQ(c.top, 10u);
  apply_config_text(c, "# comment\nk = 4\nmetric=euclidean\ncommunities = r/ADHD, marriage\n");
  EXPECT_EQ(c.k, 4u);
  EXPECT_EQ(c.metric, AssignMetric::euclidean);
  EXPECT_EQ(c.community_filter, (std::vector<std::string>{"adhd", "marriage"}));
  apply_setting(c, "ipip-k", "3");
  EXPECT_EQ(c.ipip_k, 3u);
  apply_setting(c, "k", "7");
  EXPECT_EQ(c.k, 7u);
}

TEST(Config, RelativePathsResolveAgainstConfigFile) {
  RunConfig c = desk_config("unused");
  EXPECT_EQ(c.lexicon, (kDesk / "adjectives.txt").lexically_normal());
}

TEST(Config, BadValuesAreConfigErrors) {
  RunConfig c;
  EXPECT_THROW(apply_setting(c, "metric", "manhattan"), Error);
  EXPECT_THROW(apply_setting(c, "k", "-1"), Error);
  EXPECT_THROW(apply_setting(c, "colour", "blue"), Error);
  EXPECT_THROW(apply_config_text(c, "k 6\n"), Error);
  c.k = 0;
  EXPECT_THROW(validate_config(c), Error);
}

TEST(Config, DigestIgnoresOutputDirAndThreads) {
  RunConfig a, b;
  b.out = "elsewhere";
  b.threads = 8;
  EXPECT_EQ(config_digest(a), config_digest(b));
  b.seed = 7;
  EXPECT_NE(config_digest(a), config_digest(b));
  RunConfig parsed;
  apply_config_text(parsed, serialize_config(a));
  EXPECT_EQ(serialize_config(parsed), serialize_config(a));
}

TEST(Run, ProfileWithoutModelsIsMissingInput) {
  fs::path out = fresh_dir("no-models");
  std::ostringstream log;
  RunOutcome r = run_subcommand("profile", desk_config(out), log);
  EXPECT_EQ(r.exit_code, kExitMissingInput);
  EXPECT_NE(r.message.find("not found"), std::string::npos);
  // Nothing was committed.
  EXPECT_FALSE(fs::exists(out / "manifest-profile.json"));
  EXPECT_FALSE(fs::exists(out / ".staging-profile"));
}

TEST(Run, MissingInputFileAndUnknownSubcommand) {
  fs::path out = fresh_dir("missing");
  RunConfig c = desk_config(out);
  c.corpus = kDesk / "no-such-corpus.jsonl";
  std::ostringstream log;
  EXPECT_EQ(run_subcommand("scan-corpus", c, log).exit_code, kExitMissingInput);
  EXPECT_EQ(run_subcommand("frobnicate", c, log).exit_code, kExitConfig);
  c.k = 0;
  EXPECT_EQ(run_subcommand("cluster-lexicon", c, log).exit_code, kExitConfig);
}

TEST(Run, FailedStageLeavesNoPartialArtifacts) {
  fs::path out = fresh_dir("failed");
  RunConfig c = desk_config(out);
  c.k = 31;  // more clusters than adjectives
  std::ostringstream log;
  RunOutcome r = run_subcommand("cluster-lexicon", c, log);
  EXPECT_EQ(r.exit_code, kExitFailure);
  EXPECT_TRUE(!fs::exists(out) || fs::is_empty(out));
}

TEST(Run, AllOnDeskFixtureWritesEveryArtifact) {
  fs::path out = fresh_dir("all");
  RunConfig c = desk_config(out);
  c.plot_data = true;
  std::ostringstream log;
  RunOutcome r = run_subcommand("all", c, log);
  ASSERT_EQ(r.exit_code, kExitOk) << r.message << "\n" << log.str();
  for (const char* name :
       {"mention_counts.tsv", "found_vocabulary.txt", "top_communities.tsv", "scan_stats.json", "lexical_model.txt",
        "contextual_model.txt", "bigfive_model.txt", "lexical_scan.tsv", "lexical_plot.csv", "models.json",
        "profile_lexical.tsv", "profile_contextual.tsv", "profile_bigfive.tsv", "profiles.json", "fit_scores.tsv",
        "fit_items.tsv", "nearest_items.tsv", "ipip_clusters.txt", "trait_mapping.tsv", "ipip_plot.csv",
        "validation.json", "report.json", "model_comparison.tsv", "config.txt", "manifest-scan-corpus.json",
        "manifest-report.json"}) {
    EXPECT_TRUE(fs::exists(out / name)) << name;
  }
  const std::string digest = config_digest(c);
  EXPECT_EQ(first_line(out / "profile_lexical.tsv"), "# config-digest: " + digest);
  auto report = nlohmann::json::parse(std::ifstream(out / "report.json"));
  EXPECT_EQ(report["config_digest"], digest);
  auto manifest = nlohmann::json::parse(std::ifstream(out / "manifest-report.json"));
  EXPECT_EQ(manifest["artifacts"]["report.json"], sha256_file(out / "report.json"));
  EXPECT_EQ(manifest["seed"], 42);
}

TEST(Run, StagesCanBeRerunIndividually) {
  fs::path out = fresh_dir("rerun");
  RunConfig c = desk_config(out);
  std::ostringstream log;
  ASSERT_EQ(run_subcommand("all", c, log).exit_code, kExitOk);
  const std::string before = sha256_file(out / "profile_bigfive.tsv");
  ASSERT_EQ(run_subcommand("profile", c, log).exit_code, kExitOk);
  EXPECT_EQ(sha256_file(out / "profile_bigfive.tsv"), before);
  ASSERT_EQ(run_subcommand("cluster-lexicon", c, log).exit_code, kExitOk);
  EXPECT_TRUE(fs::exists(out / "cluster_lexicon.json"));
}

TEST(Run, ThreadCountDoesNotChangeArtifacts) {
  fs::path a = fresh_dir("threads-1"), b = fresh_dir("threads-4");
  RunConfig ca = desk_config(a), cb = desk_config(b);
  cb.threads = 4;
  std::ostringstream log;
  ASSERT_EQ(run_subcommand("all", ca, log).exit_code, kExitOk);
  ASSERT_EQ(run_subcommand("all", cb, log).exit_code, kExitOk);
  for (const auto& entry : fs::directory_iterator(a)) {
    EXPECT_EQ(sha256_file(entry.path()), sha256_file(b / entry.path().filename())) << entry.path().filename();
  }
}
