#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "perslex/corpus.hpp"
#include "perslex/error.hpp"
#include "perslex/eval.hpp"

using namespace perslex;
using fixtures::Points;

namespace {

ConceptModel model_from(const Points& centroids, const std::string& prefix = "c") {
  ConceptModel m;
  m.name = "test";
  for (std::size_t i = 0; i < centroids.size(); ++i) {
    m.concepts.push_back({prefix + std::to_string(i), centroids[i], {}, {}});
  }
  return m;
}

EmbeddedItems items_from(const Points& rows) {
  EmbeddedItems items;
  items.vectors = fixtures::to_matrix(rows);
  for (std::size_t i = 0; i < rows.size(); ++i) items.texts.push_back("item " + std::to_string(i));
  return items;
}

ConceptModel bigfive_from(const Points& centroids) {
  ConceptModel m = model_from(centroids);
  m.name = "bigfive";
  for (std::size_t t = 0; t < 5; ++t) m.concepts[t].label = std::string(1, "OCEAN"[t]);
  return m;
}

}  // namespace

TEST(ProfileTest, SingleConceptIsHundredPercent) {
  MentionCounts counts(std::vector<std::string>{"kind"});
  counts.add_comment("a");
  counts.add_mention("a", 0, 3);
  VectorSet vs(2);
  vs.add("kind", std::vector<double>{1, 0});
  std::vector<std::string> subs = {"a"};
  Profile p = profile(counts, model_from({{1, 0.1}}), vs, subs);
  ASSERT_EQ(p.rows.size(), 1u);
  EXPECT_EQ(p.rows[0].percent, std::vector<double>{100.0});
}

TEST(ProfileTest, EvenSplitAcrossConcepts) {
  MentionCounts counts(std::vector<std::string>{"kind", "cruel"});
  counts.add_comment("a");
  counts.add_mention("a", 0);
  counts.add_mention("a", 1);
  VectorSet vs(2);
  vs.add("kind", std::vector<double>{1, 0});
  vs.add("cruel", std::vector<double>{0, 1});
  std::vector<std::string> subs = {"a", "silent"};
  counts.add_comment("silent");
  Profile p = profile(counts, model_from({{1, 0}, {0, 1}}), vs, subs);
  ASSERT_EQ(p.rows.size(), 1u);
  EXPECT_EQ(p.rows[0].percent, (std::vector<double>{50.0, 50.0}));
  EXPECT_EQ(p.empty_communities, std::vector<std::string>{"silent"});
}

TEST(ProfileTest, UnembeddedAdjectivesAreDropped) {
  MentionCounts counts(std::vector<std::string>{"kind", "zany"});
  counts.add_comment("a");
  counts.add_mention("a", 0, 2);
  counts.add_mention("a", 1, 5);
  VectorSet vs(2);
  vs.add("kind", std::vector<double>{1, 0});
  std::vector<std::string> subs = {"a"};
  Profile p = profile(counts, model_from({{1, 0}, {0, 1}}), vs, subs);
  EXPECT_EQ(p.rows[0].total, 2u);
  EXPECT_EQ(p.unresolved, std::vector<std::string>{"zany"});
}

TEST(FitScore, IdenticalConceptGivesOne) {
  Points rows = {{1, 2, 3}, {1, 2, 3}};
  FitReport f = fit_score(model_from({{1, 2, 3}}), items_from(rows));
  EXPECT_NEAR(f.score, 1.0, 1e-15);
}

TEST(FitScore, MatchesMeanOfMaxOracle) {
  auto items = fixtures::random_points(8, 5, 41);
  auto concepts = fixtures::random_points(3, 5, 42);
  FitReport f = fit_score(model_from(concepts), items_from(items));
  EXPECT_NEAR(f.score, oracle::mean_of_max(items, concepts), 1e-12);
  ASSERT_EQ(f.rows.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(f.rows[i].concept_index, oracle::argmax_cosine(items[i], concepts));
}

TEST(NearestItems, CentroidItemRanksFirst) {
  Points items = {{0, 1}, {1, 0}, {1, 1}};
  auto ranked = nearest_items(model_from({{1, 1}, {0, 1}}), items_from(items), 3);
  EXPECT_EQ(ranked[0][0].id, "item 2");
  EXPECT_EQ(ranked[1][0].id, "item 0");
}

TEST(NearestItems, MatchesFullSortOracle) {
  auto items = fixtures::random_points(5, 3, 51);
  auto concepts = fixtures::random_points(2, 3, 52);
  auto embedded = items_from(items);
  auto ranked = nearest_items(model_from(concepts), embedded, 5);
  for (std::size_t c = 0; c < 2; ++c) {
    std::vector<std::pair<std::string, double>> scored;
    for (std::size_t i = 0; i < 5; ++i) scored.emplace_back(embedded.texts[i], oracle::cosine(items[i], concepts[c]));
    auto expected = oracle::full_sort(scored);
    for (std::size_t r = 0; r < 5; ++r) EXPECT_EQ(ranked[c][r].id, expected[r].first);
  }
}

TEST(ItemClusters, KEqualsNGivesSingletons) {
  auto items = items_from(fixtures::random_points(5, 3, 61));
  ItemClustering ic = cluster_items(items, 5, 1);
  auto sorted = ic.clusters.assignment;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  // Original-space centroids of singletons are the items themselves.
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t d = 0; d < 3; ++d) {
      EXPECT_NEAR(ic.original_centroids(ic.clusters.assignment[i], d), items.vectors(i, d), 1e-9);
    }
  }
}

TEST(ItemClusters, PlantedBlobsRecovered) {
  auto b = fixtures::planted_blobs(5, 12, 6, 15.0, 71);
  ItemClustering ic = cluster_items(items_from(b.points), 5, 3);
  EXPECT_TRUE(fixtures::same_partition(ic.clusters.assignment, b.labels));
}

TEST(TraitMappingTest, IdenticalCentroidsMapOneToOne) {
  auto traits = fixtures::random_points(5, 6, 81);
  TraitMapping m = map_clusters_to_traits(fixtures::to_matrix(traits), bigfive_from(traits));
  for (std::size_t c = 0; c < 5; ++c) {
    ASSERT_TRUE(m.cluster_trait[c]);
    EXPECT_EQ(static_cast<std::size_t>(*m.cluster_trait[c]), c);
    EXPECT_NEAR(m.cluster_similarity[c], 1.0, 1e-12);
  }
  EXPECT_TRUE(m.unmatched_traits.empty());
}

TEST(TraitMappingTest, ThreeClustersMatchInjectiveOracle) {
  Points traits = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 1, 1, 1}};
  Points clusters = {{0.9, 0.1, 0.05, 0}, {0.1, 0.2, 0.95, 0.1}, {0.05, 0.1, 0.1, 0.9}};
  std::vector<std::vector<double>> sim(3, std::vector<double>(5));
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t t = 0; t < 5; ++t) sim[c][t] = oracle::cosine(clusters[c], traits[t]);
  auto best = oracle::best_injective(sim);
  for (MatchPolicy policy : {MatchPolicy::nearest_only, MatchPolicy::greedy}) {
    TraitMapping m = map_clusters_to_traits(fixtures::to_matrix(clusters), bigfive_from(traits), policy);
    for (std::size_t c = 0; c < 3; ++c) {
      ASSERT_TRUE(m.cluster_trait[c]);
      EXPECT_EQ(static_cast<std::size_t>(*m.cluster_trait[c]), best[c]);
    }
    EXPECT_EQ(m.unmatched_traits.size(), 2u);
  }
}

TEST(TraitMappingTest, ContestedTraitLeavesLoserUnmatched) {
  Points traits = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, 0, 0}, {0, -1, 0}};
  // Two clusters both prefer O; the weaker one must not fall back to another trait.
  Points clusters = {{1, 0.1, 0}, {1, 0.5, 0}, {0, 1, 0.1}, {0, 0.1, 1}, {-1, 0, 0.1}};
  TraitMapping nearest = map_clusters_to_traits(fixtures::to_matrix(clusters), bigfive_from(traits));
  EXPECT_EQ(nearest.unmatched_clusters, std::vector<std::size_t>{1});
  EXPECT_EQ(nearest.unmatched_traits, std::vector<Trait>{Trait::N});
  TraitMapping greedy =
      map_clusters_to_traits(fixtures::to_matrix(clusters), bigfive_from(traits), MatchPolicy::greedy);
  EXPECT_TRUE(greedy.unmatched_traits.empty());
}

TEST(Projection, FirstComponentSeparatesBlobs) {
  auto b = fixtures::planted_blobs(2, 10, 5, 30.0, 91);
  ScaledSet s = standardize(fixtures::to_matrix(b.points));
  auto pts = project_2d(s, b.labels);
  ASSERT_EQ(pts.size(), 20u);
  double min0 = 1e300, max0 = -1e300, min1 = 1e300, max1 = -1e300;
  for (std::size_t i = 0; i < 20; ++i) {
    (b.labels[i] ? min1 : min0) = std::min(b.labels[i] ? min1 : min0, pts[i].x);
    (b.labels[i] ? max1 : max0) = std::max(b.labels[i] ? max1 : max0, pts[i].x);
  }
  EXPECT_TRUE(max0 < min1 || max1 < min0);
  EXPECT_EQ(project_2d(s, b.labels)[3].x, pts[3].x);
}
