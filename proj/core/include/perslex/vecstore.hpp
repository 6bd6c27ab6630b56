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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace perslex {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  void append_row(std::span<const double> values);

  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct EmbeddingRecord {
  std::string_view id;
  std::span<const double> vector;
};

// Id -> embedding table. Ids are normalized (case-folded, NFC, trimmed) on
// insertion and must be unique; iteration order is insertion order.
class VectorSet {
 public:
  explicit VectorSet(std::size_t dim = 0) : rows_(0, dim) {}

  // Throws Error{dimension_mismatch | duplicate_id | non_finite | invalid_argument}.
  void add(std::string_view id, std::span<const double> vector);

  std::size_t size() const noexcept { return ids_.size(); }
  std::size_t dim() const noexcept { return rows_.cols(); }
  bool empty() const noexcept { return ids_.empty(); }

  const std::string& id(std::size_t i) const { return ids_[i]; }
  std::span<const double> vector(std::size_t i) const { return rows_.row(i); }
  EmbeddingRecord record(std::size_t i) const { return {ids_[i], rows_.row(i)}; }

  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const Matrix& matrix() const noexcept { return rows_; }

  // Looks up a raw or normalized key.
  std::optional<std::size_t> find(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id).has_value(); }

  // Rows for `ids` in the given order. Ids without an embedding are skipped
  // and appended to `missing` when provided.
  VectorSet subset(std::span<const std::string> ids, std::vector<std::string>* missing = nullptr) const;

  friend bool operator==(const VectorSet& a, const VectorSet& b) {
    return a.ids_ == b.ids_ && a.rows_ == b.rows_;
  }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  Matrix rows_;
};

enum class VectorFormat { text, binary };

struct VectorLoadInfo {
  VectorFormat format = VectorFormat::text;
  std::size_t count = 0;
  std::size_t dim = 0;
  std::size_t comment_lines = 0;
};

// Auto-detects the text and binary (EMBV v1) layouts.
VectorSet load_vectors(const std::filesystem::path& path, VectorLoadInfo* info = nullptr);
VectorSet parse_vectors(std::string_view bytes, VectorLoadInfo* info = nullptr);
void save_vectors(const VectorSet& set, const std::filesystem::path& path, VectorFormat format);
std::string serialize_vectors(const VectorSet& set, VectorFormat format);

// Per-dimension z-scoring parameters. Standard deviation uses divisor N.
// Dimensions whose deviation is below kConstantThreshold are constant: they
// scale to 0 and unscale to the mean.
struct Scaling {
  static constexpr double kConstantThreshold = 1e-12;

  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<std::size_t> constant_dims;

  std::size_t dim() const noexcept { return mean.size(); }
  bool is_constant(std::size_t d) const noexcept { return stddev[d] < kConstantThreshold; }

  std::vector<double> transform(std::span<const double> v) const;
  std::vector<double> inverse(std::span<const double> z) const;

  friend bool operator==(const Scaling&, const Scaling&) = default;
};

struct ScaledSet {
  std::vector<std::string> ids;
  Scaling scaling;
  Matrix scaled;

  std::size_t size() const noexcept { return scaled.rows(); }
  std::size_t dim() const noexcept { return scaled.cols(); }
};

ScaledSet standardize(const VectorSet& set);
ScaledSet standardize(const Matrix& rows, std::vector<std::string> ids = {});

double dot(std::span<const double> u, std::span<const double> v);
double norm(std::span<const double> v);
double squared_euclidean(std::span<const double> u, std::span<const double> v);

// dot(u,v)/(|u||v|) clamped to [-1,1]. Zero-norm input throws
// Error{undefined_similarity}.
double cosine(std::span<const double> u, std::span<const double> v);

// Element-wise mean. Empty input throws Error{empty_input}.
std::vector<double> centroid(std::span<const std::span<const double>> vectors);
std::vector<double> centroid(const Matrix& rows, std::span<const std::size_t> members);

}  // namespace perslex
