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

#include "perslex/cluster.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "io_util.hpp"
#include "parallel.hpp"
#include "perslex/error.hpp"
#include "perslex/rng.hpp"
#include "perslex/text.hpp"

namespace perslex {

namespace {

constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

std::size_t count_distinct_rows(const Matrix& points) {
  std::vector<std::size_t> order(points.rows());
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    auto ra = points.row(a);
    auto rb = points.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  std::sort(order.begin(), order.end(), less);
  std::size_t distinct = order.empty() ? 0 : 1;
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (less(order[i - 1], order[i])) ++distinct;
  }
  return distinct;
}

// Nearest centroid per point; ties go to the lowest index.
void assign_points(const Matrix& points, const Matrix& centroids, std::vector<std::size_t>& assignment,
                   std::vector<double>& dist2, unsigned threads) {
  detail::parallel_for(points.rows(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto p = points.row(i);
      std::size_t best = 0;
      double best_d = squared_euclidean(p, centroids.row(0));
      for (std::size_t c = 1; c < centroids.rows(); ++c) {
        double d = squared_euclidean(p, centroids.row(c));
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      assignment[i] = best;
      dist2[i] = best_d;
    }
  });
}

// An empty cluster takes the point farthest from its centroid (among points
// whose cluster would stay non-empty).
void repair_empty(std::vector<std::size_t>& assignment, std::vector<double>& dist2, std::size_t k) {
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t a : assignment) ++sizes[a];
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] != 0) continue;
    std::size_t far = kUnassigned;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      if (sizes[assignment[i]] < 2) continue;
      if (far == kUnassigned || dist2[i] > dist2[far]) far = i;
    }
    if (far == kUnassigned) throw Error(Errc::non_separable, "cannot repair an empty cluster");
    --sizes[assignment[far]];
    assignment[far] = c;
    dist2[far] = 0.0;
    sizes[c] = 1;
  }
}

Matrix cluster_means(const Matrix& points, std::span<const std::size_t> assignment, std::size_t k) {
  Matrix means(k, points.cols());
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    auto m = means.row(assignment[i]);
    auto p = points.row(i);
    for (std::size_t d = 0; d < p.size(); ++d) m[d] += p[d];
    ++sizes[assignment[i]];
  }
  for (std::size_t c = 0; c < k; ++c) {
    for (double& x : means.row(c)) x /= static_cast<double>(sizes[c]);
  }
  return means;
}

Matrix seed_plus_plus(const Matrix& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.rows();
  Matrix centers(0, points.cols());
  std::size_t first = static_cast<std::size_t>(rng.below(n));
  centers.append_row(points.row(first));
  std::vector<double> closest(n);
  for (std::size_t i = 0; i < n; ++i) closest[i] = squared_euclidean(points.row(i), points.row(first));

  const std::size_t trials = 2 + static_cast<std::size_t>(std::log(static_cast<double>(k)));
  std::vector<double> cumulative(n);
  std::vector<double> candidate_closest(n);
  std::vector<double> best_closest(n);
  for (std::size_t c = 1; c < k; ++c) {
    std::partial_sum(closest.begin(), closest.end(), cumulative.begin());
    const double potential = cumulative.back();
    std::size_t best_candidate = kUnassigned;
    double best_potential = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
      double r = rng.uniform() * potential;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
      std::size_t candidate = it == cumulative.end() ? n - 1 : static_cast<std::size_t>(it - cumulative.begin());
      double pot = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        candidate_closest[i] = std::min(closest[i], squared_euclidean(points.row(i), points.row(candidate)));
        pot += candidate_closest[i];
      }
      if (pot < best_potential) {
        best_potential = pot;
        best_candidate = candidate;
        best_closest.swap(candidate_closest);
      }
    }
    centers.append_row(points.row(best_candidate));
    closest.swap(best_closest);
  }
  return centers;
}

void validate_points(const Matrix& points, std::size_t k) {
  if (points.empty()) throw Error(Errc::empty_input, "kmeans on an empty set");
  if (k < 1 || k > points.rows()) {
    throw Error(Errc::invalid_argument,
                "k=" + std::to_string(k) + " outside [1, " + std::to_string(points.rows()) + "]");
  }
  if (k > 1 && count_distinct_rows(points) < k) {
    throw Error(Errc::non_separable, "fewer than k=" + std::to_string(k) + " distinct points");
  }
}

}  // namespace

std::vector<std::vector<std::size_t>> ClusterModel::members() const {
  std::vector<std::vector<std::size_t>> out(k);
  for (std::size_t i = 0; i < assignment.size(); ++i) out[assignment[i]].push_back(i);
  return out;
}

double inertia(const Matrix& points, const Matrix& centroids, std::span<const std::size_t> assignment) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    total += squared_euclidean(points.row(i), centroids.row(assignment[i]));
  }
  return total;
}

ClusterModel lloyd(const Matrix& points, Matrix initial_centroids, const KMeansOptions& options) {
  const std::size_t n = points.rows();
  const std::size_t k = initial_centroids.rows();
  ClusterModel model;
  model.k = k;
  model.centroids = std::move(initial_centroids);
  model.assignment.assign(n, kUnassigned);
  std::vector<std::size_t> next(n);
  std::vector<double> dist2(n);
  // Stops at the assignment fixed point: an unchanged assignment reproduces
  // bit-identical centroids, so displacement is exactly zero.
  for (std::size_t iter = 1; iter <= options.max_iter; ++iter) {
    assign_points(points, model.centroids, next, dist2, options.threads);
    repair_empty(next, dist2, k);
    const bool changed = next != model.assignment;
    model.assignment = next;
    model.centroids = cluster_means(points, model.assignment, k);
    model.inertia = inertia(points, model.centroids, model.assignment);
    model.inertia_trace.push_back(model.inertia);
    model.iterations_run = iter;
    if (!changed) {
      model.converged = true;
      break;
    }
  }
  return model;
}

ClusterModel kmeans(const Matrix& points, std::size_t k, std::uint64_t seed, const KMeansOptions& options) {
  validate_points(points, k);
  Rng rng(seed);
  const std::size_t restarts = std::max<std::size_t>(1, options.n_init);
  ClusterModel best;
  bool have_best = false;
  for (std::size_t r = 0; r < restarts; ++r) {
    ClusterModel candidate = lloyd(points, seed_plus_plus(points, k, rng), options);
    if (!have_best || candidate.inertia < best.inertia) {
      best = std::move(candidate);
      have_best = true;
    }
  }
  best.seed = seed;
  return best;
}

ClusterModel kmeans(const ScaledSet& data, std::size_t k, std::uint64_t seed, const KMeansOptions& options) {
  ClusterModel model = kmeans(data.scaled, k, seed, options);
  model.ids = data.ids;
  return model;
}

namespace {

// Mean silhouette given a distance oracle dist(i, j).
template <typename Dist>
double silhouette_impl(std::size_t n, std::span<const std::size_t> assignment, std::size_t k, unsigned threads,
                       Dist&& dist) {
  if (k < 2) throw Error(Errc::invalid_argument, "silhouette requires k >= 2");
  if (assignment.size() != n) throw Error(Errc::invalid_argument, "assignment does not match the data");
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t a : assignment) {
    if (a >= k) throw Error(Errc::invalid_argument, "assignment index out of range");
    ++sizes[a];
  }
  std::vector<double> per_point(n, 0.0);
  detail::parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> sums(k);
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t own = assignment[i];
      if (sizes[own] < 2) {
        per_point[i] = 0.0;
        continue;
      }
      std::fill(sums.begin(), sums.end(), 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) sums[assignment[j]] += dist(i, j);
      }
      const double a = sums[own] / static_cast<double>(sizes[own] - 1);
      double b = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        if (c != own && sizes[c] > 0) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
      }
      const double denom = std::max(a, b);
      per_point[i] = (denom > 0.0 && std::isfinite(b)) ? (b - a) / denom : 0.0;
    }
  }, 16);
  double total = 0.0;
  for (double s : per_point) total += s;
  return total / static_cast<double>(n);
}

}  // namespace

double silhouette(const Matrix& points, std::span<const std::size_t> assignment, std::size_t k, unsigned threads) {
  return silhouette_impl(points.rows(), assignment, k, threads, [&](std::size_t i, std::size_t j) {
    return std::sqrt(squared_euclidean(points.row(i), points.row(j)));
  });
}

double silhouette(const ScaledSet& data, const ClusterModel& model, unsigned threads) {
  return silhouette(data.scaled, model.assignment, model.k, threads);
}

KScanResult scan_k(const ScaledSet& data, std::size_t kmin, std::size_t kmax, std::uint64_t seed,
                  const KMeansOptions& options) {
  const std::size_t n = data.size();
  if (kmin < 2 || kmin > kmax || kmax > n) {
    throw Error(Errc::invalid_argument, "scan range must satisfy 2 <= kmin <= kmax <= n");
  }
  // Pairwise distances are shared by every k when they fit in memory.
  constexpr std::size_t kMaxCachedPoints = 4096;
  std::vector<double> pairwise;
  if (n <= kMaxCachedPoints) {
    pairwise.resize(n * n);
    detail::parallel_for(n, options.threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          pairwise[i * n + j] = std::sqrt(squared_euclidean(data.scaled.row(i), data.scaled.row(j)));
        }
      }
    }, 16);
  }
  KScanResult result;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = kmin; k <= kmax; ++k) {
    ClusterModel model = kmeans(data.scaled, k, seed, options);
    double s = pairwise.empty()
                   ? silhouette(data.scaled, model.assignment, k, options.threads)
                   : silhouette_impl(n, model.assignment, k, options.threads,
                                     [&](std::size_t i, std::size_t j) { return pairwise[i * n + j]; });
    result.rows.push_back({k, s, model.inertia});
    if (s > best) {
      best = s;
      result.recommended_k = k;
    }
  }
  return result;
}

double cohesion(std::span<const std::span<const double>> members) {
  std::vector<double> c = centroid(members);
  double total = 0.0;
  for (auto m : members) total += cosine(m, c);
  return total / static_cast<double>(members.size());
}

double cohesion(const Matrix& rows, std::span<const std::size_t> members) {
  std::vector<std::span<const double>> views;
  views.reserve(members.size());
  for (std::size_t i : members) views.push_back(rows.row(i));
  return cohesion(views);
}

std::vector<std::vector<RankedId>> representative_words(const ClusterModel& model, const VectorSet& original,
                                                        std::size_t n) {
  if (original.size() != model.assignment.size()) {
    throw Error(Errc::invalid_argument, "vector set is not aligned with the cluster model");
  }
  std::vector<std::vector<RankedId>> out;
  for (const auto& members : model.members()) {
    std::vector<RankedId> ranked;
    if (!members.empty()) {
      std::vector<double> c = centroid(original.matrix(), members);
      for (std::size_t i : members) ranked.push_back({original.id(i), cosine(original.vector(i), c)});
      std::sort(ranked.begin(), ranked.end(), [](const RankedId& a, const RankedId& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.id < b.id;
      });
      if (ranked.size() > n) ranked.resize(n);
    }
    out.push_back(std::move(ranked));
  }
  return out;
}

ClusterQuality assess(const ClusterModel& model, const ScaledSet& scaled, const VectorSet& original,
                      std::size_t representative_n, CohesionSpace space, unsigned threads) {
  ClusterQuality q;
  q.silhouette = model.k >= 2 ? silhouette(scaled, model, threads) : std::numeric_limits<double>::quiet_NaN();
  const Matrix& rows = space == CohesionSpace::original ? original.matrix() : scaled.scaled;
  for (const auto& members : model.members()) {
    q.sizes.push_back(members.size());
    q.cohesion_per_cluster.push_back(members.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                     : cohesion(rows, members));
  }
  q.representative_words = representative_words(model, original, representative_n);
  return q;
}

std::string serialize_cluster_model(const ClusterModel& model) {
  std::string out = "# perslex cluster-model v1\n";
  out += "k=" + std::to_string(model.k) + "\n";
  out += "dim=" + std::to_string(model.dim()) + "\n";
  out += "n=" + std::to_string(model.assignment.size()) + "\n";
  out += "seed=" + std::to_string(model.seed) + "\n";
  out += "inertia=" + text::format_real(model.inertia) + "\n";
  out += "iterations=" + std::to_string(model.iterations_run) + "\n";
  out += "converged=" + std::string(model.converged ? "1" : "0") + "\n";
  out += "inertia_trace=";
  for (std::size_t i = 0; i < model.inertia_trace.size(); ++i) {
    if (i) out += ' ';
    out += text::format_real(model.inertia_trace[i]);
  }
  out += "\n[centroids]\n";
  for (std::size_t c = 0; c < model.k; ++c) {
    auto row = model.centroids.row(c);
    for (std::size_t d = 0; d < row.size(); ++d) {
      if (d) out += ' ';
      out += text::format_real(row[d]);
    }
    out += '\n';
  }
  out += "[assignment]\n";
  for (std::size_t i = 0; i < model.assignment.size(); ++i) {
    out += (i < model.ids.size() ? model.ids[i] : std::to_string(i));
    out += '\t';
    out += std::to_string(model.assignment[i]);
    out += '\n';
  }
  return out;
}

namespace {

std::uint64_t parse_uint(std::string_view s, const char* what) {
  s = text::trim_ascii(s);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw Error(Errc::parse, std::string("bad integer for ") + what + ": '" + std::string(s) + "'");
  }
  return v;
}

std::vector<double> parse_row(std::string_view line, std::size_t expected, const char* what) {
  std::vector<double> row;
  for (auto f : text::split(text::trim_ascii(line), ' ')) {
    if (f.empty()) continue;
    auto v = text::parse_real(f);
    if (!v) throw Error(Errc::parse, std::string("bad number in ") + what);
    row.push_back(*v);
  }
  if (expected != static_cast<std::size_t>(-1) && row.size() != expected) {
    throw Error(Errc::dimension_mismatch, std::string(what) + " row has wrong length");
  }
  return row;
}

}  // namespace

ClusterModel parse_cluster_model(std::string_view text_in) {
  ClusterModel model;
  std::size_t dim = 0;
  std::size_t n = 0;
  enum class Section { header, centroids, assignment } section = Section::header;
  for (std::string_view line : text::split(text_in, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (line == "[centroids]") {
      section = Section::centroids;
      model.centroids = Matrix(0, dim);
      continue;
    }
    if (line == "[assignment]") {
      section = Section::assignment;
      continue;
    }
    switch (section) {
      case Section::header: {
        auto eq = line.find('=');
        if (eq == std::string_view::npos) throw Error(Errc::parse, "bad header line in cluster model");
        auto key = line.substr(0, eq);
        auto value = line.substr(eq + 1);
        if (key == "k") model.k = parse_uint(value, "k");
        else if (key == "dim") dim = parse_uint(value, "dim");
        else if (key == "n") n = parse_uint(value, "n");
        else if (key == "seed") model.seed = parse_uint(value, "seed");
        else if (key == "inertia") model.inertia = parse_row(value, 1, "inertia")[0];
        else if (key == "iterations") model.iterations_run = parse_uint(value, "iterations");
        else if (key == "converged") model.converged = parse_uint(value, "converged") != 0;
        else if (key == "inertia_trace") model.inertia_trace = parse_row(value, static_cast<std::size_t>(-1), "trace");
        break;
      }
      case Section::centroids:
        model.centroids.append_row(parse_row(line, dim, "centroid"));
        break;
      case Section::assignment: {
        auto tab = line.rfind('\t');
        if (tab == std::string_view::npos) throw Error(Errc::parse, "bad assignment row");
        model.ids.emplace_back(line.substr(0, tab));
        std::size_t c = parse_uint(line.substr(tab + 1), "cluster");
        if (c >= model.k) throw Error(Errc::parse, "assignment cluster out of range");
        model.assignment.push_back(c);
        break;
      }
    }
  }
  if (model.k == 0 || model.centroids.rows() != model.k) throw Error(Errc::parse, "cluster model is incomplete");
  if (model.assignment.size() != n) throw Error(Errc::parse, "cluster model assignment count mismatch");
  return model;
}

void save_cluster_model(const ClusterModel& model, const std::filesystem::path& path) {
  detail::write_file_atomic(path, serialize_cluster_model(model));
}

ClusterModel load_cluster_model(const std::filesystem::path& path) {
  return parse_cluster_model(detail::read_file(path));
}

}  // namespace perslex
