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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "perslex/cluster.hpp"
#include "perslex/corpus.hpp"
#include "perslex/lexicon.hpp"
#include "perslex/models.hpp"
#include "perslex/vecstore.hpp"

namespace perslex {

struct CommunityProfile {
  std::string community;
  std::vector<std::uint64_t> counts;  // per concept
  std::vector<double> percent;        // per concept, sums to 100
  std::uint64_t total = 0;
};

struct Profile {
  std::string model;
  std::vector<std::string> labels;
  std::vector<CommunityProfile> rows;
  // Requested communities with no assignable mention; excluded from rows.
  std::vector<std::string> empty_communities;
  // Counted adjectives without a usable embedding; dropped.
  std::vector<std::string> unresolved;
};

// Each adjective occurrence adds its count to the adjective's concept;
// percentages are over the community's resolved mentions.
Profile profile(const MentionCounts& counts, const ConceptModel& model, const VectorSet& vectors,
                std::span<const std::string> communities, AssignMetric metric = AssignMetric::cosine);

// IPIP items joined to their embeddings.
struct EmbeddedItems {
  std::vector<std::string> texts;
  Matrix vectors;

  std::size_t size() const noexcept { return texts.size(); }
};

EmbeddedItems embed_items(std::span<const IpipItem> items, const VectorSet& vectors,
                          std::vector<std::string>* missing = nullptr);

struct FitRow {
  std::string item;
  std::size_t concept_index = 0;
  double similarity = 0.0;
};

struct FitReport {
  std::string model;
  // Mean over items of the best cosine to any concept centroid.
  double score = 0.0;
  std::vector<FitRow> rows;
};

// Uses original-space centroids so all models are compared in one space.
FitReport fit_score(const ConceptModel& model, const EmbeddedItems& items);

// Per concept, the n most cosine-similar items; ties by item text.
std::vector<std::vector<RankedId>> nearest_items(const ConceptModel& model, const EmbeddedItems& items,
                                                 std::size_t n);

struct ItemClustering {
  ScaledSet scaled;
  ClusterModel clusters;
  // Cluster centroids mapped back to the items' original space.
  Matrix original_centroids;
};

ItemClustering cluster_items(const EmbeddedItems& items, std::size_t k, std::uint64_t seed,
                             const KMeansOptions& options = {});

enum class MatchPolicy {
  // A cluster may only take the trait it is most similar to; contested
  // traits go to the most similar cluster and the losers stay unmatched.
  nearest_only,
  // Plain greedy over all pairs.
  greedy,
};

struct TraitMapping {
  Matrix similarity;  // clusters x traits (O, C, E, A, N)
  std::vector<std::optional<Trait>> cluster_trait;
  std::vector<double> cluster_similarity;  // NaN when unmatched
  std::vector<std::size_t> unmatched_clusters;
  std::vector<Trait> unmatched_traits;
};

// Repeatedly takes the highest remaining cluster/trait cosine (ties: lower
// cluster, then lower trait) among eligible unassigned pairs.
TraitMapping map_clusters_to_traits(const Matrix& cluster_centroids, const ConceptModel& bigfive,
                                    MatchPolicy policy = MatchPolicy::nearest_only);

struct PlotPoint {
  std::string id;
  double x = 0.0;
  double y = 0.0;
  std::size_t cluster = 0;
};

// First two principal components of the standardized rows. Component signs
// are fixed so the largest-magnitude loading is positive.
std::vector<PlotPoint> project_2d(const ScaledSet& scaled, std::span<const std::size_t> assignment);

}  // namespace perslex
