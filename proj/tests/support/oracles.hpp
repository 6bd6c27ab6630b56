#pragma once

// Brute-force reference implementations. They are deliberately written
// without any perslex code so they can be used as test oracles.

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using Points = std::vector<std::vector<double>>;

double sq_dist(const std::vector<double>& a, const std::vector<double>& b);
double cosine(const std::vector<double>& a, const std::vector<double>& b);
std::vector<double> mean(const Points& rows);

// Minimum within-cluster SSE over every partition of `points` into exactly k
// non-empty groups.
double min_sse_partition(const Points& points, std::size_t k);

// Direct definition: s(i) = (b - a) / max(a, b); singletons score 0.
double silhouette(const Points& points, const std::vector<std::size_t>& labels);

// Mean over items of the maximum cosine to any concept.
double mean_of_max(const Points& items, const Points& concepts);

// Index of the most cosine-similar concept, first one on ties.
std::size_t argmax_cosine(const std::vector<double>& v, const Points& concepts);

// (id, score) pairs sorted by score descending, then by the tie key.
std::vector<std::pair<std::string, double>> full_sort(std::vector<std::pair<std::string, double>> scored);

// Best total similarity over injective maps rows -> columns (rows <= cols),
// returned as the column chosen for each row.
std::vector<std::size_t> best_injective(const std::vector<std::vector<double>>& sim);

// Case-insensitive whole-token counting: folds and NFC-normalizes with ICU,
// splits on anything that is not a letter, digit, apostrophe or hyphen, and
// looks tokens up in an ordered set.
std::map<std::string, std::size_t> count_tokens(const std::string& body, const std::vector<std::string>& words);

}  // namespace oracle
