#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "perslex/vecstore.hpp"

namespace fixtures {

using Points = std::vector<std::vector<double>>;

inline perslex::Matrix to_matrix(const Points& rows) {
  perslex::Matrix m(0, rows.empty() ? 0 : rows.front().size());
  for (const auto& r : rows) m.append_row(r);
  return m;
}

inline Points to_points(const perslex::Matrix& m) {
  Points out;
  for (std::size_t i = 0; i < m.rows(); ++i) out.emplace_back(m.row(i).begin(), m.row(i).end());
  return out;
}

inline Points random_points(std::size_t n, std::size_t dim, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, scale);
  Points out(n, std::vector<double>(dim));
  for (auto& r : out)
    for (double& v : r) v = dist(gen);
  return out;
}

struct Blobs {
  Points points;
  std::vector<std::size_t> labels;
  Points centers;
};

// Gaussian blobs with unit sigma whose centers are at least `min_separation`
// apart, drawn uniformly from a cube of half-width box_scale * min_separation.
// A small box packs the blobs evenly; a large one produces uneven spacing.
inline Blobs planted_blobs(std::size_t blobs, std::size_t per_blob, std::size_t dim, double min_separation,
                           std::uint64_t seed, double box_scale = 4.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> box(-box_scale * min_separation, box_scale * min_separation);
  std::normal_distribution<double> noise(0.0, 1.0);
  Blobs b;
  while (b.centers.size() < blobs) {
    std::vector<double> c(dim);
    for (double& v : c) v = box(gen);
    bool ok = true;
    for (const auto& other : b.centers) {
      double d = 0;
      for (std::size_t i = 0; i < dim; ++i) d += (c[i] - other[i]) * (c[i] - other[i]);
      ok = ok && d >= min_separation * min_separation;
    }
    if (ok) b.centers.push_back(c);
  }
  for (std::size_t c = 0; c < blobs; ++c) {
    for (std::size_t i = 0; i < per_blob; ++i) {
      std::vector<double> p(dim);
      for (std::size_t d = 0; d < dim; ++d) p[d] = b.centers[c][d] + noise(gen);
      b.points.push_back(p);
      b.labels.push_back(c);
    }
  }
  return b;
}

// True when `a` and `b` induce the same partition up to relabeling.
inline bool same_partition(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
  return true;
}

}  // namespace fixtures
