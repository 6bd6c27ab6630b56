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

#include "perslex/eval.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "perslex/error.hpp"

namespace perslex {

Profile profile(const MentionCounts& counts, const ConceptModel& model, const VectorSet& vectors,
                std::span<const std::string> communities, AssignMetric metric) {
  Profile out;
  out.model = model.name;
  for (const auto& c : model.concepts) out.labels.push_back(c.label);

  // Resolve each counted adjective once.
  const ConceptAssigner assigner(model, metric);
  std::vector<std::optional<std::size_t>> concept_of(counts.lexicon().size());
  std::vector<bool> needed(counts.lexicon().size(), false);
  for (const auto& [name, c] : counts.communities()) {
    for (const auto& [adj, n] : c.adjectives) {
      if (n > 0) needed[adj] = true;
    }
  }
  for (std::size_t i = 0; i < needed.size(); ++i) {
    if (!needed[i]) continue;
    const std::string& word = counts.lexicon()[i];
    auto row = vectors.find(word);
    if (!row) {
      out.unresolved.push_back(word);
      continue;
    }
    try {
      concept_of[i] = assigner.assign(word, vectors.vector(*row)).concept_index;
    } catch (const Error& e) {
      if (e.code() != Errc::undefined_similarity) throw;
      out.unresolved.push_back(word);
    }
  }

  for (const auto& name : communities) {
    auto it = counts.communities().find(name);
    CommunityProfile row;
    row.community = name;
    row.counts.assign(model.size(), 0);
    if (it != counts.communities().end()) {
      for (const auto& [adj, n] : it->second.adjectives) {
        if (concept_of[adj]) {
          row.counts[*concept_of[adj]] += n;
          row.total += n;
        }
      }
    }
    if (row.total == 0) {
      out.empty_communities.push_back(name);
      continue;
    }
    for (std::uint64_t n : row.counts) {
      row.percent.push_back(100.0 * static_cast<double>(n) / static_cast<double>(row.total));
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

EmbeddedItems embed_items(std::span<const IpipItem> items, const VectorSet& vectors,
                          std::vector<std::string>* missing) {
  EmbeddedItems out;
  out.vectors = Matrix(0, vectors.dim());
  for (const auto& item : items) {
    auto row = vectors.find(item.key);
    if (!row) {
      if (missing) missing->push_back(item.text);
      continue;
    }
    out.texts.push_back(item.text);
    out.vectors.append_row(vectors.vector(*row));
  }
  return out;
}

FitReport fit_score(const ConceptModel& model, const EmbeddedItems& items) {
  if (items.size() == 0) throw Error(Errc::empty_input, "no embedded items to score");
  if (model.concepts.empty()) throw Error(Errc::invalid_argument, "model has no concepts");
  FitReport report;
  report.model = model.name;
  double total = 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto v = items.vectors.row(i);
    FitRow row{items.texts[i], 0, -std::numeric_limits<double>::infinity()};
    for (std::size_t c = 0; c < model.size(); ++c) {
      double s = cosine(v, model.concepts[c].centroid);
      if (s > row.similarity) {
        row.similarity = s;
        row.concept_index = c;
      }
    }
    total += row.similarity;
    report.rows.push_back(std::move(row));
  }
  report.score = total / static_cast<double>(items.size());
  return report;
}

std::vector<std::vector<RankedId>> nearest_items(const ConceptModel& model, const EmbeddedItems& items,
                                                 std::size_t n) {
  std::vector<std::vector<RankedId>> out;
  for (const auto& con : model.concepts) {
    std::vector<RankedId> ranked;
    for (std::size_t i = 0; i < items.size(); ++i) {
      ranked.push_back({items.texts[i], cosine(items.vectors.row(i), con.centroid)});
    }
    std::sort(ranked.begin(), ranked.end(), [](const RankedId& a, const RankedId& b) {
      if (a.similarity != b.similarity) return a.similarity > b.similarity;
      return a.id < b.id;
    });
    if (ranked.size() > n) ranked.resize(n);
    out.push_back(std::move(ranked));
  }
  return out;
}

ItemClustering cluster_items(const EmbeddedItems& items, std::size_t k, std::uint64_t seed,
                             const KMeansOptions& options) {
  if (items.size() < k) {
    throw Error(Errc::invalid_argument, "need at least k=" + std::to_string(k) + " items, have " +
                                            std::to_string(items.size()));
  }
  ItemClustering out;
  out.scaled = standardize(items.vectors, items.texts);
  out.clusters = kmeans(out.scaled, k, seed, options);
  const auto members = out.clusters.members();
  out.original_centroids = Matrix(0, items.vectors.cols());
  for (std::size_t c = 0; c < k; ++c) out.original_centroids.append_row(centroid(items.vectors, members[c]));
  return out;
}

TraitMapping map_clusters_to_traits(const Matrix& cluster_centroids, const ConceptModel& bigfive,
                                    MatchPolicy policy) {
  std::vector<std::size_t> trait_concept;
  for (Trait t : kTraits) {
    auto idx = bigfive.concept_index(std::string(1, trait_code(t)));
    if (!idx) throw Error(Errc::invalid_argument, std::string("Big Five model lacks trait ") + trait_code(t));
    trait_concept.push_back(*idx);
  }
  const std::size_t clusters = cluster_centroids.rows();
  const std::size_t traits = kTraits.size();
  TraitMapping out;
  out.similarity = Matrix(clusters, traits);
  for (std::size_t c = 0; c < clusters; ++c) {
    for (std::size_t t = 0; t < traits; ++t) {
      out.similarity(c, t) = cosine(cluster_centroids.row(c), bigfive.concepts[trait_concept[t]].centroid);
    }
  }

  struct Pair {
    std::size_t cluster;
    std::size_t trait;
    double similarity;
  };
  std::vector<Pair> pairs;
  for (std::size_t c = 0; c < clusters; ++c) {
    std::size_t best = 0;
    for (std::size_t t = 1; t < traits; ++t) {
      if (out.similarity(c, t) > out.similarity(c, best)) best = t;
    }
    for (std::size_t t = 0; t < traits; ++t) {
      if (policy == MatchPolicy::greedy || t == best) pairs.push_back({c, t, out.similarity(c, t)});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& a, const Pair& b) { return a.similarity > b.similarity; });

  out.cluster_trait.assign(clusters, std::nullopt);
  out.cluster_similarity.assign(clusters, std::numeric_limits<double>::quiet_NaN());
  std::vector<bool> trait_used(traits, false);
  for (const Pair& p : pairs) {
    if (out.cluster_trait[p.cluster] || trait_used[p.trait]) continue;
    out.cluster_trait[p.cluster] = kTraits[p.trait];
    out.cluster_similarity[p.cluster] = p.similarity;
    trait_used[p.trait] = true;
  }
  for (std::size_t c = 0; c < clusters; ++c) {
    if (!out.cluster_trait[c]) out.unmatched_clusters.push_back(c);
  }
  for (std::size_t t = 0; t < traits; ++t) {
    if (!trait_used[t]) out.unmatched_traits.push_back(kTraits[t]);
  }
  return out;
}

std::vector<PlotPoint> project_2d(const ScaledSet& scaled, std::span<const std::size_t> assignment) {
  const std::size_t n = scaled.size();
  const std::size_t dim = scaled.dim();
  if (assignment.size() != n) throw Error(Errc::invalid_argument, "assignment does not match the data");
  Eigen::MatrixXd x(n, dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dim; ++d) x(i, d) = scaled.scaled(i, d);
  }
  Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(std::max<std::size_t>(1, n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error(Errc::invalid_argument, "PCA eigen-decomposition failed");
  // Eigenvalues ascend; take the last two columns.
  Eigen::MatrixXd components(dim, 2);
  for (int c = 0; c < 2; ++c) {
    Eigen::Index col = static_cast<Eigen::Index>(dim) - 1 - c;
    if (col < 0) {
      components.col(c).setZero();
      continue;
    }
    Eigen::VectorXd v = solver.eigenvectors().col(col);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    components.col(c) = v;
  }
  Eigen::MatrixXd projected = x * components;
  std::vector<PlotPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({i < scaled.ids.size() ? scaled.ids[i] : std::to_string(i), projected(i, 0), projected(i, 1),
                   assignment[i]});
  }
  return out;
}

}  // namespace perslex
