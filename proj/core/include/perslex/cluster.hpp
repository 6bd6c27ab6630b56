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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perslex/vecstore.hpp"

namespace perslex {

struct KMeansOptions {
  // Restarts from independent k-means++ seedings; the lowest inertia wins.
  std::size_t n_init = 10;
  std::size_t max_iter = 300;
  unsigned threads = 1;
};

// A fitted partition in standardized space.
struct ClusterModel {
  std::size_t k = 0;
  Matrix centroids;
  std::vector<std::size_t> assignment;
  std::vector<std::string> ids;
  double inertia = 0.0;
  std::uint64_t seed = 0;
  std::size_t iterations_run = 0;
  bool converged = false;
  // Inertia after every Lloyd update of the winning restart.
  std::vector<double> inertia_trace;

  std::size_t dim() const noexcept { return centroids.cols(); }
  std::vector<std::vector<std::size_t>> members() const;

  friend bool operator==(const ClusterModel&, const ClusterModel&) = default;
};

// K-Means with greedy k-means++ seeding. Requires 1 <= k <= n and at least k
// distinct points (Error{non_separable} otherwise).
ClusterModel kmeans(const Matrix& points, std::size_t k, std::uint64_t seed, const KMeansOptions& options = {});
ClusterModel kmeans(const ScaledSet& data, std::size_t k, std::uint64_t seed, const KMeansOptions& options = {});

// Lloyd iterations from explicit starting centroids. Exposed for tests.
ClusterModel lloyd(const Matrix& points, Matrix initial_centroids, const KMeansOptions& options = {});

// Sum of squared distances from each point to its assigned centroid.
double inertia(const Matrix& points, const Matrix& centroids, std::span<const std::size_t> assignment);

// Mean silhouette coefficient with Euclidean distance. Points in singleton
// clusters contribute 0. Requires k >= 2.
double silhouette(const Matrix& points, std::span<const std::size_t> assignment, std::size_t k,
                  unsigned threads = 1);
double silhouette(const ScaledSet& data, const ClusterModel& model, unsigned threads = 1);

struct KScanRow {
  std::size_t k = 0;
  double silhouette = 0.0;
  double inertia = 0.0;
};

struct KScanResult {
  std::vector<KScanRow> rows;
  // argmax silhouette, ties to the smaller k.
  std::size_t recommended_k = 0;
};

KScanResult scan_k(const ScaledSet& data, std::size_t kmin, std::size_t kmax, std::uint64_t seed,
                  const KMeansOptions& options = {});

// Mean cosine of each member to the members' centroid.
double cohesion(std::span<const std::span<const double>> members);
double cohesion(const Matrix& rows, std::span<const std::size_t> members);

struct RankedId {
  std::string id;
  double similarity = 0.0;

  friend bool operator==(const RankedId&, const RankedId&) = default;
};

// Per cluster, the n members most cosine-similar to the cluster's centroid in
// `original` space; descending, ties by id. `original` rows align with the
// model's points.
std::vector<std::vector<RankedId>> representative_words(const ClusterModel& model, const VectorSet& original,
                                                        std::size_t n);

enum class CohesionSpace { original, standardized };

struct ClusterQuality {
  double silhouette = 0.0;  // NaN when k < 2
  std::vector<std::size_t> sizes;
  std::vector<double> cohesion_per_cluster;
  std::vector<std::vector<RankedId>> representative_words;
};

ClusterQuality assess(const ClusterModel& model, const ScaledSet& scaled, const VectorSet& original,
                      std::size_t representative_n, CohesionSpace space = CohesionSpace::original,
                      unsigned threads = 1);

std::string serialize_cluster_model(const ClusterModel& model);
ClusterModel parse_cluster_model(std::string_view text);
void save_cluster_model(const ClusterModel& model, const std::filesystem::path& path);
ClusterModel load_cluster_model(const std::filesystem::path& path);

}  // namespace perslex
