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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "perslex/cluster.hpp"
#include "perslex/lexicon.hpp"
#include "perslex/vecstore.hpp"

namespace perslex {

enum class ModelSpace { original, standardized };
enum class AssignMetric { cosine, euclidean };

std::string_view to_string(ModelSpace s) noexcept;
std::string_view to_string(AssignMetric m) noexcept;

struct Concept {
  std::string label;
  // Mean of the members' original embeddings.
  std::vector<double> centroid;
  // Centroid in standardized space; empty for original-space models.
  std::vector<double> scaled_centroid;
  std::vector<std::string> members;

  friend bool operator==(const Concept&, const Concept&) = default;
};

// Named set of labeled centroids used to categorize words and phrases.
struct ConceptModel {
  std::string name;
  ModelSpace space = ModelSpace::original;
  std::optional<Scaling> scaling;  // present iff space == standardized
  // Cluster-built models keep their fitted partition for member words.
  bool cluster_built = false;
  std::vector<Concept> concepts;

  std::size_t dim() const noexcept { return concepts.empty() ? 0 : concepts.front().centroid.size(); }
  std::size_t size() const noexcept { return concepts.size(); }

  // Centroid used for assignment (scaled when the model is standardized).
  std::span<const double> assignment_centroid(std::size_t i) const;
  std::vector<double> to_model_space(std::span<const double> v) const;
  std::optional<std::size_t> member_concept(std::string_view id) const;
  std::optional<std::size_t> concept_index(std::string_view label) const;

  // Throws Error{invalid_argument} on duplicate labels or mixed dimensions.
  void validate() const;

  friend bool operator==(const ConceptModel&, const ConceptModel&) = default;
};

struct ConceptAssignment {
  std::size_t concept_index = 0;
  double similarity = 0.0;  // cosine to the chosen centroid in model space
};

// Nearest concept in the model's space: maximal cosine (or minimal Euclidean
// distance), ties to the lowest index. A zero-norm input throws
// Error{undefined_similarity}; a zero-norm centroid scores 0.
ConceptAssignment assign(const ConceptModel& model, std::span<const double> vector,
                         AssignMetric metric = AssignMetric::cosine);

// Like assign(), but words that were clustered into a cluster-built model
// keep the cluster they were fitted into.
ConceptAssignment assign_word(const ConceptModel& model, std::string_view id, std::span<const double> vector,
                              AssignMetric metric = AssignMetric::cosine);

// assign_word() over many words: indexes the model's members once.
class ConceptAssigner {
 public:
  explicit ConceptAssigner(const ConceptModel& model, AssignMetric metric = AssignMetric::cosine);

  ConceptAssignment assign(std::string_view id, std::span<const double> vector) const;

 private:
  const ConceptModel* model_;
  AssignMetric metric_;
  std::unordered_map<std::string, std::size_t> members_;
};

struct MemberAgreement {
  std::size_t members = 0;
  std::size_t disagreements = 0;
  double rate() const noexcept { return members ? static_cast<double>(disagreements) / members : 0.0; }
};

// How often the free assignment rule disagrees with the fitted partition.
MemberAgreement member_agreement(const ConceptModel& model, const VectorSet& vectors,
                                 AssignMetric metric = AssignMetric::cosine);

struct ClusterModelOptions {
  std::size_t k = 6;
  std::uint64_t seed = 42;
  KMeansOptions kmeans;
  std::size_t representative_n = 5;
  CohesionSpace cohesion_space = CohesionSpace::original;
};

struct ClusterBuild {
  ConceptModel model;
  ClusterModel clusters;
  ClusterQuality quality;
  VectorSet vectors;  // the clustered rows, in clustering order
  ScaledSet scaled;
  std::vector<std::string> missing;  // requested words without an embedding
};

// Standardize, K-Means, then one concept per cluster ("cluster-0", ...).
ClusterBuild build_cluster_model(std::string name, const VectorSet& vectors, const ClusterModelOptions& options);
ClusterBuild build_lexical_model(const VectorSet& vectors, const Lexicon& lexicon, const ClusterModelOptions& options);
ClusterBuild build_contextual_model(const VectorSet& vectors, const Lexicon& found,
                                    const ClusterModelOptions& options);

struct BigFiveOptions {
  ModelSpace space = ModelSpace::original;
  // Required for the standardized space; usually the lexicon's scaling.
  std::optional<Scaling> scaling;
};

struct BigFiveBuild {
  ConceptModel model;
  std::vector<std::string> unresolved;
};

// One concept per trait (labels O, C, E, A, N), centroid = mean of the
// trait's marker embeddings. A trait with no resolvable marker throws
// Error{unresolved}.
BigFiveBuild build_bigfive_model(const VectorSet& vectors, const MarkerSet& markers,
                                 const BigFiveOptions& options = {});

std::string serialize_concept_model(const ConceptModel& model);
ConceptModel parse_concept_model(std::string_view text);
void save_concept_model(const ConceptModel& model, const std::filesystem::path& path);
ConceptModel load_concept_model(const std::filesystem::path& path);

}  // namespace perslex
