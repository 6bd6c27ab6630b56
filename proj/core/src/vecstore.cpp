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

#include "perslex/vecstore.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "io_util.hpp"
#include "perslex/error.hpp"
#include "perslex/text.hpp"

namespace perslex {

namespace detail {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(Errc::io, "read failed: " + path.string());
  return std::move(buf).str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(Errc::io, "write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(Errc::io, "cannot rename into " + path.string());
  }
}

}  // namespace detail

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', 'V'};
constexpr std::uint8_t kBinaryVersion = 0x01;

template <typename T>
T read_le(std::string_view bytes, std::size_t& pos) {
  if (pos + sizeof(T) > bytes.size()) throw Error(Errc::parse, "truncated binary vector file");
  T value{};
  std::memcpy(&value, bytes.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
    auto raw = std::bit_cast<std::array<std::uint8_t, sizeof(T)>>(value);
    std::reverse(raw.begin(), raw.end());
    value = std::bit_cast<T>(raw);
  }
  pos += sizeof(T);
  return value;
}

template <typename T>
void write_le(std::string& out, T value) {
  auto raw = std::bit_cast<std::array<char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw.begin(), raw.end());
  out.append(raw.data(), raw.size());
}

VectorSet parse_binary(std::string_view bytes, VectorLoadInfo* info) {
  std::size_t pos = sizeof(kMagic);
  auto version = read_le<std::uint8_t>(bytes, pos);
  if (version != kBinaryVersion) {
    throw Error(Errc::parse, "unsupported binary vector version " + std::to_string(version));
  }
  auto count = read_le<std::uint32_t>(bytes, pos);
  auto dim = read_le<std::uint32_t>(bytes, pos);
  if (count == 0) throw Error(Errc::empty_input, "vector file has no records");
  if (dim == 0) throw Error(Errc::dimension_mismatch, "vector file declares dimension 0");
  VectorSet set(dim);
  std::vector<double> row(dim);
  for (std::uint32_t r = 0; r < count; ++r) {
    auto id_len = read_le<std::uint16_t>(bytes, pos);
    if (pos + id_len > bytes.size()) throw Error(Errc::parse, "truncated binary vector file");
    std::string_view id = bytes.substr(pos, id_len);
    pos += id_len;
    for (std::uint32_t d = 0; d < dim; ++d) row[d] = read_le<float>(bytes, pos);
    set.add(id, row);
  }
  if (pos != bytes.size()) throw Error(Errc::parse, "trailing bytes after last record");
  if (info) {
    info->format = VectorFormat::binary;
    info->count = set.size();
    info->dim = set.dim();
  }
  return set;
}

VectorSet parse_text(std::string_view bytes, VectorLoadInfo* info) {
  std::optional<VectorSet> set;
  std::vector<double> row;
  std::size_t comments = 0;
  std::size_t line_no = 0;
  for (std::string_view line : text::split(bytes, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty() && line.front() == '#') {
      ++comments;
      continue;
    }
    if (text::trim_ascii(line).empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(Errc::parse, "line " + std::to_string(line_no) + ": missing TAB after id");
    }
    std::string_view id = line.substr(0, tab);
    row.clear();
    for (std::string_view field : text::split(line.substr(tab + 1), ' ')) {
      if (field.empty()) continue;
      auto value = text::parse_real(field);
      if (!value) {
        throw Error(Errc::parse, "line " + std::to_string(line_no) + ": bad number '" + std::string(field) + "'");
      }
      row.push_back(*value);
    }
    if (row.empty()) {
      throw Error(Errc::dimension_mismatch, "line " + std::to_string(line_no) + ": record has no coordinates");
    }
    if (!set) set.emplace(row.size());
    try {
      set->add(id, row);
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!set || set->empty()) throw Error(Errc::empty_input, "vector file has no records");
  if (info) {
    info->format = VectorFormat::text;
    info->count = set->size();
    info->dim = set->dim();
    info->comment_lines = comments;
  }
  return std::move(*set);
}

}  // namespace

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) {
    throw Error(Errc::dimension_mismatch, "row length " + std::to_string(values.size()) +
                                              " != " + std::to_string(cols_));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

void VectorSet::add(std::string_view id, std::span<const double> vector) {
  std::string key = text::normalize_key(id);
  if (key.empty()) throw Error(Errc::invalid_argument, "empty id");
  if (dim() == 0) throw Error(Errc::dimension_mismatch, "vector set has dimension 0");
  if (vector.size() != dim()) {
    throw Error(Errc::dimension_mismatch, "'" + key + "' has dimension " + std::to_string(vector.size()) +
                                              ", expected " + std::to_string(dim()));
  }
  for (double x : vector) {
    if (!std::isfinite(x)) throw Error(Errc::non_finite, "'" + key + "' has a non-finite coordinate");
  }
  if (index_.contains(key)) throw Error(Errc::duplicate_id, "duplicate id '" + key + "'");
  index_.emplace(key, ids_.size());
  ids_.push_back(std::move(key));
  rows_.append_row(vector);
}

std::optional<std::size_t> VectorSet::find(std::string_view id) const {
  if (auto it = index_.find(std::string(id)); it != index_.end()) return it->second;
  if (auto it = index_.find(text::normalize_key(id)); it != index_.end()) return it->second;
  return std::nullopt;
}

VectorSet VectorSet::subset(std::span<const std::string> ids, std::vector<std::string>* missing) const {
  VectorSet out(dim());
  for (const auto& id : ids) {
    if (auto i = find(id)) {
      if (!out.contains(ids_[*i])) out.add(ids_[*i], vector(*i));
    } else if (missing) {
      missing->push_back(id);
    }
  }
  return out;
}

VectorSet parse_vectors(std::string_view bytes, VectorLoadInfo* info) {
  if (bytes.empty()) throw Error(Errc::empty_input, "vector file is empty");
  if (bytes.size() >= sizeof(kMagic) && std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) == 0) {
    return parse_binary(bytes, info);
  }
  return parse_text(bytes, info);
}

VectorSet load_vectors(const std::filesystem::path& path, VectorLoadInfo* info) {
  std::string bytes = detail::read_file(path);
  try {
    return parse_vectors(bytes, info);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string serialize_vectors(const VectorSet& set, VectorFormat format) {
  std::string out;
  if (format == VectorFormat::binary) {
    out.append(kMagic, sizeof(kMagic));
    write_le<std::uint8_t>(out, kBinaryVersion);
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(set.size()));
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(set.dim()));
    for (std::size_t i = 0; i < set.size(); ++i) {
      const std::string& id = set.id(i);
      if (id.size() > UINT16_MAX) throw Error(Errc::invalid_argument, "id longer than 65535 bytes");
      write_le<std::uint16_t>(out, static_cast<std::uint16_t>(id.size()));
      out += id;
      for (double x : set.vector(i)) write_le<float>(out, static_cast<float>(x));
    }
    return out;
  }
  for (std::size_t i = 0; i < set.size(); ++i) {
    const std::string& id = set.id(i);
    if (id.find_first_of("\t\n") != std::string::npos) {
      throw Error(Errc::invalid_argument, "id '" + id + "' cannot be written as text");
    }
    out += id;
    out += '\t';
    bool first = true;
    for (double x : set.vector(i)) {
      if (!first) out += ' ';
      out += text::format_real(x);
      first = false;
    }
    out += '\n';
  }
  return out;
}

void save_vectors(const VectorSet& set, const std::filesystem::path& path, VectorFormat format) {
  detail::write_file_atomic(path, serialize_vectors(set, format));
}

std::vector<double> Scaling::transform(std::span<const double> v) const {
  if (v.size() != dim()) throw Error(Errc::dimension_mismatch, "cannot scale vector of wrong dimension");
  std::vector<double> z(v.size());
  for (std::size_t d = 0; d < v.size(); ++d) {
    z[d] = is_constant(d) ? 0.0 : (v[d] - mean[d]) / stddev[d];
  }
  return z;
}

std::vector<double> Scaling::inverse(std::span<const double> z) const {
  if (z.size() != dim()) throw Error(Errc::dimension_mismatch, "cannot unscale vector of wrong dimension");
  std::vector<double> v(z.size());
  for (std::size_t d = 0; d < z.size(); ++d) {
    v[d] = is_constant(d) ? mean[d] : z[d] * stddev[d] + mean[d];
  }
  return v;
}

ScaledSet standardize(const Matrix& rows, std::vector<std::string> ids) {
  if (rows.empty()) throw Error(Errc::empty_input, "cannot standardize an empty set");
  const std::size_t n = rows.rows();
  const std::size_t dim = rows.cols();
  ScaledSet out;
  out.ids = std::move(ids);
  out.scaling.mean.assign(dim, 0.0);
  out.scaling.stddev.assign(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = rows.row(i);
    for (std::size_t d = 0; d < dim; ++d) out.scaling.mean[d] += r[d];
  }
  for (double& m : out.scaling.mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = rows.row(i);
    for (std::size_t d = 0; d < dim; ++d) {
      double c = r[d] - out.scaling.mean[d];
      out.scaling.stddev[d] += c * c;
    }
  }
  for (std::size_t d = 0; d < dim; ++d) {
    out.scaling.stddev[d] = std::sqrt(out.scaling.stddev[d] / static_cast<double>(n));
    if (out.scaling.is_constant(d)) out.scaling.constant_dims.push_back(d);
  }
  out.scaled = Matrix(n, dim);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = rows.row(i);
    auto z = out.scaled.row(i);
    for (std::size_t d = 0; d < dim; ++d) {
      z[d] = out.scaling.is_constant(d) ? 0.0 : (r[d] - out.scaling.mean[d]) / out.scaling.stddev[d];
    }
  }
  return out;
}

ScaledSet standardize(const VectorSet& set) { return standardize(set.matrix(), set.ids()); }

double dot(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw Error(Errc::dimension_mismatch, "dot of unequal lengths");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double squared_euclidean(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw Error(Errc::dimension_mismatch, "distance of unequal lengths");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double d = u[i] - v[i];
    s += d * d;
  }
  return s;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw Error(Errc::dimension_mismatch, "cosine of unequal lengths");
  double nu = norm(u);
  double nv = norm(v);
  if (nu == 0.0 || nv == 0.0) throw Error(Errc::undefined_similarity, "cosine with a zero-norm vector");
  return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

std::vector<double> centroid(std::span<const std::span<const double>> vectors) {
  if (vectors.empty()) throw Error(Errc::empty_input, "centroid of an empty list");
  std::vector<double> c(vectors.front().size(), 0.0);
  for (auto v : vectors) {
    if (v.size() != c.size()) throw Error(Errc::dimension_mismatch, "centroid of unequal lengths");
    for (std::size_t d = 0; d < c.size(); ++d) c[d] += v[d];
  }
  for (double& x : c) x /= static_cast<double>(vectors.size());
  return c;
}

std::vector<double> centroid(const Matrix& rows, std::span<const std::size_t> members) {
  if (members.empty()) throw Error(Errc::empty_input, "centroid of an empty list");
  std::vector<double> c(rows.cols(), 0.0);
  for (std::size_t i : members) {
    auto r = rows.row(i);
    for (std::size_t d = 0; d < c.size(); ++d) c[d] += r[d];
  }
  for (double& x : c) x /= static_cast<double>(members.size());
  return c;
}

}  // namespace perslex
