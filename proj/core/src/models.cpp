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

#include "perslex/models.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <set>

#include "io_util.hpp"
#include "perslex/error.hpp"
#include "perslex/text.hpp"

namespace perslex {

std::string_view to_string(ModelSpace s) noexcept {
  return s == ModelSpace::original ? "original" : "standardized";
}

std::string_view to_string(AssignMetric m) noexcept { return m == AssignMetric::cosine ? "cosine" : "euclidean"; }

std::span<const double> ConceptModel::assignment_centroid(std::size_t i) const {
  const Concept& c = concepts.at(i);
  return space == ModelSpace::standardized ? std::span<const double>(c.scaled_centroid)
                                           : std::span<const double>(c.centroid);
}

std::vector<double> ConceptModel::to_model_space(std::span<const double> v) const {
  if (v.size() != dim()) {
    throw Error(Errc::dimension_mismatch, "vector of dimension " + std::to_string(v.size()) + " vs model dimension " +
                                              std::to_string(dim()));
  }
  if (space == ModelSpace::standardized) return scaling->transform(v);
  return {v.begin(), v.end()};
}

std::optional<std::size_t> ConceptModel::member_concept(std::string_view id) const {
  for (std::size_t i = 0; i < concepts.size(); ++i) {
    const auto& m = concepts[i].members;
    if (std::find(m.begin(), m.end(), id) != m.end()) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> ConceptModel::concept_index(std::string_view label) const {
  for (std::size_t i = 0; i < concepts.size(); ++i) {
    if (concepts[i].label == label) return i;
  }
  return std::nullopt;
}

void ConceptModel::validate() const {
  if (concepts.empty()) throw Error(Errc::invalid_argument, "model '" + name + "' has no concepts");
  std::set<std::string> labels;
  for (const auto& c : concepts) {
    if (!labels.insert(c.label).second) throw Error(Errc::invalid_argument, "duplicate concept label '" + c.label + "'");
    if (c.centroid.size() != dim()) throw Error(Errc::dimension_mismatch, "concept centroids differ in dimension");
    if (space == ModelSpace::standardized && c.scaled_centroid.size() != dim()) {
      throw Error(Errc::dimension_mismatch, "scaled centroid missing or of wrong dimension");
    }
  }
  if (space == ModelSpace::standardized && (!scaling || scaling->dim() != dim())) {
    throw Error(Errc::invalid_argument, "standardized model without matching scaling parameters");
  }
}

namespace {

double safe_cosine(std::span<const double> v, std::span<const double> c) {
  if (norm(c) == 0.0) return 0.0;
  return cosine(v, c);
}

ConceptAssignment assign_in_space(const ConceptModel& model, std::span<const double> v, AssignMetric metric) {
  if (norm(v) == 0.0) throw Error(Errc::undefined_similarity, "cannot assign a zero-norm vector");
  ConceptAssignment best;
  if (metric == AssignMetric::cosine) {
    double best_sim = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < model.size(); ++i) {
      double s = safe_cosine(v, model.assignment_centroid(i));
      if (s > best_sim) {
        best_sim = s;
        best = {i, s};
      }
    }
    return best;
  }
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < model.size(); ++i) {
    double d = squared_euclidean(v, model.assignment_centroid(i));
    if (d < best_d) {
      best_d = d;
      best.concept_index = i;
    }
  }
  best.similarity = safe_cosine(v, model.assignment_centroid(best.concept_index));
  return best;
}

}  // namespace

ConceptAssignment assign(const ConceptModel& model, std::span<const double> vector, AssignMetric metric) {
  if (model.concepts.empty()) throw Error(Errc::invalid_argument, "model has no concepts");
  return assign_in_space(model, model.to_model_space(vector), metric);
}

ConceptAssignment assign_word(const ConceptModel& model, std::string_view id, std::span<const double> vector,
                              AssignMetric metric) {
  return ConceptAssigner(model, metric).assign(id, vector);
}

ConceptAssigner::ConceptAssigner(const ConceptModel& model, AssignMetric metric) : model_(&model), metric_(metric) {
  if (model.cluster_built) {
    for (std::size_t i = 0; i < model.concepts.size(); ++i) {
      for (const auto& m : model.concepts[i].members) members_.emplace(m, i);
    }
  }
}

ConceptAssignment ConceptAssigner::assign(std::string_view id, std::span<const double> vector) const {
  if (auto it = members_.find(std::string(id)); it != members_.end()) {
    std::vector<double> v = model_->to_model_space(vector);
    return {it->second, norm(v) == 0.0 ? 0.0 : safe_cosine(v, model_->assignment_centroid(it->second))};
  }
  return perslex::assign(*model_, vector, metric_);
}

MemberAgreement member_agreement(const ConceptModel& model, const VectorSet& vectors, AssignMetric metric) {
  MemberAgreement out;
  for (std::size_t c = 0; c < model.concepts.size(); ++c) {
    for (const auto& m : model.concepts[c].members) {
      auto row = vectors.find(m);
      if (!row) continue;
      ++out.members;
      if (assign(model, vectors.vector(*row), metric).concept_index != c) ++out.disagreements;
    }
  }
  return out;
}

ClusterBuild build_cluster_model(std::string name, const VectorSet& vectors, const ClusterModelOptions& options) {
  if (vectors.empty()) throw Error(Errc::empty_input, "no vectors to cluster for model '" + name + "'");
  ClusterBuild build;
  build.vectors = vectors;
  build.scaled = standardize(vectors);
  build.clusters = kmeans(build.scaled, options.k, options.seed, options.kmeans);
  build.quality = assess(build.clusters, build.scaled, vectors, options.representative_n, options.cohesion_space,
                         options.kmeans.threads);
  build.model.name = std::move(name);
  build.model.space = ModelSpace::standardized;
  build.model.scaling = build.scaled.scaling;
  build.model.cluster_built = true;
  const auto members = build.clusters.members();
  for (std::size_t c = 0; c < build.clusters.k; ++c) {
    Concept con;
    con.label = "cluster-" + std::to_string(c);
    con.centroid = centroid(vectors.matrix(), members[c]);
    auto scaled = build.clusters.centroids.row(c);
    con.scaled_centroid.assign(scaled.begin(), scaled.end());
    for (std::size_t i : members[c]) con.members.push_back(vectors.id(i));
    build.model.concepts.push_back(std::move(con));
  }
  build.model.validate();
  return build;
}

ClusterBuild build_lexical_model(const VectorSet& vectors, const Lexicon& lexicon, const ClusterModelOptions& options) {
  std::vector<std::string> missing;
  VectorSet subset = vectors.subset(lexicon.entries(), &missing);
  ClusterBuild build = build_cluster_model("lexical", subset, options);
  build.missing = std::move(missing);
  return build;
}

ClusterBuild build_contextual_model(const VectorSet& vectors, const Lexicon& found,
                                    const ClusterModelOptions& options) {
  if (found.empty()) throw Error(Errc::empty_input, "no corpus-found adjectives for the contextual model");
  std::vector<std::string> missing;
  VectorSet subset = vectors.subset(found.entries(), &missing);
  ClusterBuild build = build_cluster_model("contextual", subset, options);
  build.missing = std::move(missing);
  return build;
}

BigFiveBuild build_bigfive_model(const VectorSet& vectors, const MarkerSet& markers, const BigFiveOptions& options) {
  if (options.space == ModelSpace::standardized && !options.scaling) {
    throw Error(Errc::invalid_argument, "standardized Big Five model needs scaling parameters");
  }
  BigFiveBuild build;
  build.model.name = "bigfive";
  build.model.space = options.space;
  if (options.space == ModelSpace::standardized) build.model.scaling = options.scaling;
  for (Trait t : kTraits) {
    std::vector<std::string> resolved;
    for (const auto& m : markers.of(t)) {
      if (auto row = vectors.find(m)) {
        resolved.push_back(vectors.id(*row));
      } else {
        build.unresolved.push_back(m);
      }
    }
    if (resolved.empty()) {
      throw Error(Errc::unresolved, std::string("no marker of trait ") + trait_code(t) + " has an embedding");
    }
    // Sorted so the centroid does not depend on marker file order.
    std::sort(resolved.begin(), resolved.end());
    std::vector<std::span<const double>> raw;
    std::vector<std::vector<double>> scaled_rows;
    for (const auto& id : resolved) {
      raw.push_back(vectors.vector(*vectors.find(id)));
      if (options.space == ModelSpace::standardized) scaled_rows.push_back(options.scaling->transform(raw.back()));
    }
    Concept con;
    con.label = std::string(1, trait_code(t));
    con.centroid = centroid(raw);
    if (options.space == ModelSpace::standardized) {
      std::vector<std::span<const double>> views(scaled_rows.begin(), scaled_rows.end());
      con.scaled_centroid = centroid(views);
    }
    con.members = std::move(resolved);
    build.model.concepts.push_back(std::move(con));
  }
  build.model.validate();
  return build;
}

namespace {

void append_row(std::string& out, std::string_view key, std::span<const double> row) {
  out += key;
  out += '=';
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ' ';
    out += text::format_real(row[i]);
  }
  out += '\n';
}

std::vector<double> parse_reals(std::string_view s) {
  std::vector<double> row;
  for (auto f : text::split(s, ' ')) {
    if (f.empty()) continue;
    auto v = text::parse_real(f);
    if (!v) throw Error(Errc::parse, "concept model: bad number '" + std::string(f) + "'");
    row.push_back(*v);
  }
  return row;
}

std::size_t parse_size(std::string_view s) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw Error(Errc::parse, "concept model: bad integer '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string serialize_concept_model(const ConceptModel& model) {
  std::string out = "# perslex concept-model v1\n";
  out += "name=" + model.name + "\n";
  out += "space=" + std::string(to_string(model.space)) + "\n";
  out += "dim=" + std::to_string(model.dim()) + "\n";
  out += "cluster_built=" + std::string(model.cluster_built ? "1" : "0") + "\n";
  out += "concepts=" + std::to_string(model.concepts.size()) + "\n";
  if (model.scaling) {
    out += "[scaling]\n";
    append_row(out, "mean", model.scaling->mean);
    append_row(out, "std", model.scaling->stddev);
  }
  for (const auto& c : model.concepts) {
    out += "[concept]\n";
    out += "label=" + c.label + "\n";
    out += "member_count=" + std::to_string(c.members.size()) + "\n";
    append_row(out, "centroid", c.centroid);
    if (!c.scaled_centroid.empty()) append_row(out, "scaled_centroid", c.scaled_centroid);
    for (const auto& m : c.members) out += "member=" + m + "\n";
  }
  return out;
}

ConceptModel parse_concept_model(std::string_view text_in) {
  ConceptModel model;
  std::size_t declared_concepts = 0;
  std::size_t dim = 0;
  std::vector<std::size_t> declared_members;
  enum class Section { header, scaling, concept_block } section = Section::header;
  for (std::string_view line : text::split(text_in, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (line == "[scaling]") {
      section = Section::scaling;
      model.scaling.emplace();
      continue;
    }
    if (line == "[concept]") {
      section = Section::concept_block;
      model.concepts.emplace_back();
      declared_members.push_back(0);
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(Errc::parse, "concept model: expected key=value");
    auto key = line.substr(0, eq);
    auto value = line.substr(eq + 1);
    switch (section) {
      case Section::header:
        if (key == "name") model.name = value;
        else if (key == "space") {
          if (value == "original") model.space = ModelSpace::original;
          else if (value == "standardized") model.space = ModelSpace::standardized;
          else throw Error(Errc::parse, "concept model: unknown space '" + std::string(value) + "'");
        } else if (key == "dim") dim = parse_size(value);
        else if (key == "cluster_built") model.cluster_built = parse_size(value) != 0;
        else if (key == "concepts") declared_concepts = parse_size(value);
        break;
      case Section::scaling:
        if (key == "mean") model.scaling->mean = parse_reals(value);
        else if (key == "std") model.scaling->stddev = parse_reals(value);
        break;
      case Section::concept_block: {
        Concept& c = model.concepts.back();
        if (key == "label") c.label = value;
        else if (key == "member_count") declared_members.back() = parse_size(value);
        else if (key == "centroid") c.centroid = parse_reals(value);
        else if (key == "scaled_centroid") c.scaled_centroid = parse_reals(value);
        else if (key == "member") c.members.emplace_back(value);
        break;
      }
    }
  }
  if (model.scaling) {
    if (model.scaling->mean.size() != model.scaling->stddev.size()) {
      throw Error(Errc::parse, "concept model: scaling rows differ in length");
    }
    for (std::size_t d = 0; d < model.scaling->dim(); ++d) {
      if (model.scaling->is_constant(d)) model.scaling->constant_dims.push_back(d);
    }
  }
  if (model.concepts.size() != declared_concepts) throw Error(Errc::parse, "concept model: concept count mismatch");
  for (std::size_t i = 0; i < model.concepts.size(); ++i) {
    if (model.concepts[i].members.size() != declared_members[i]) {
      throw Error(Errc::parse, "concept model: member count mismatch");
    }
  }
  model.validate();
  if (model.dim() != dim) throw Error(Errc::parse, "concept model: dimension mismatch");
  return model;
}

void save_concept_model(const ConceptModel& model, const std::filesystem::path& path) {
  detail::write_file_atomic(path, serialize_concept_model(model));
}

ConceptModel load_concept_model(const std::filesystem::path& path) {
  return parse_concept_model(detail::read_file(path));
}

}  // namespace perslex
