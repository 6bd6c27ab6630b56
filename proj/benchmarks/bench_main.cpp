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

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "perslex/cluster.hpp"
#include "perslex/corpus.hpp"
#include "perslex/lexicon.hpp"
#include "perslex/vecstore.hpp"

namespace {

using namespace perslex;

Matrix random_matrix(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist;
  Matrix m(0, dim);
  std::vector<double> row(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& v : row) v = dist(gen);
    m.append_row(row);
  }
  return m;
}

std::vector<std::string> synthetic_words(std::size_t n) {
  std::vector<std::string> words;
  std::mt19937_64 gen(3);
  for (std::size_t i = 0; i < n; ++i) {
    std::string w;
    const std::size_t len = 4 + gen() % 8;
    for (std::size_t c = 0; c < len; ++c) w += static_cast<char>('a' + gen() % 26);
    words.push_back(w);
  }
  return words;
}

std::vector<std::string> synthetic_bodies(const std::vector<std::string>& words, std::size_t n) {
  std::mt19937_64 gen(4);
  std::vector<std::string> bodies;
  for (std::size_t i = 0; i < n; ++i) {
    std::string b;
    for (int w = 0; w < 40; ++w) {
      b += gen() % 10 ? "filler" : words[gen() % words.size()];
      b += gen() % 7 ? " " : ", ";
    }
    bodies.push_back(b);
  }
  return bodies;
}

void BM_Cosine(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  Matrix m = random_matrix(2, dim, 1);
  for (auto _ : state) benchmark::DoNotOptimize(cosine(m.row(0), m.row(1)));
}
BENCHMARK(BM_Cosine)->Arg(16)->Arg(768);

// Lexicon-sized clustering: 2818 points, one restart.
void BM_KMeans(benchmark::State& state) {
  Matrix m = random_matrix(2818, static_cast<std::size_t>(state.range(0)), 2);
  KMeansOptions opts;
  opts.n_init = 1;
  for (auto _ : state) benchmark::DoNotOptimize(kmeans(m, 6, 42, opts).inertia);
}
BENCHMARK(BM_KMeans)->Arg(64)->Arg(768)->Unit(benchmark::kMillisecond);

void BM_Silhouette(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Matrix m = random_matrix(n, 32, 5);
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i % 6;
  for (auto _ : state) benchmark::DoNotOptimize(silhouette(m, labels, 6));
}
BENCHMARK(BM_Silhouette)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Matcher(benchmark::State& state) {
  const auto strategy = state.range(0) == 0 ? MatchStrategy::automaton : MatchStrategy::hash_set;
  auto words = synthetic_words(2818);
  Lexicon lex(words);
  TokenMatcher matcher(lex, strategy);
  auto bodies = synthetic_bodies(words, 1000);
  std::vector<std::uint32_t> hits;
  std::size_t bytes = 0;
  for (const auto& b : bodies) bytes += b.size();
  for (auto _ : state) {
    for (const auto& b : bodies) {
      hits.clear();
      matcher.match(b, hits);
    }
    benchmark::DoNotOptimize(hits.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes));
  state.SetLabel(state.range(0) == 0 ? "automaton" : "hash_set");
}
BENCHMARK(BM_Matcher)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
