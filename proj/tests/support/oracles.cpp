#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

namespace oracle {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

std::vector<double> mean(const Points& rows) {
  std::vector<double> m(rows.at(0).size(), 0.0);
  for (const auto& r : rows)
    for (std::size_t d = 0; d < m.size(); ++d) m[d] += r[d];
  for (double& v : m) v /= static_cast<double>(rows.size());
  return m;
}

namespace {

double sse_of(const Points& points, const std::vector<std::size_t>& labels, std::size_t k) {
  double total = 0;
  for (std::size_t c = 0; c < k; ++c) {
    Points group;
    for (std::size_t i = 0; i < points.size(); ++i)
      if (labels[i] == c) group.push_back(points[i]);
    if (group.empty()) return std::numeric_limits<double>::infinity();
    auto m = mean(group);
    for (const auto& p : group) total += sq_dist(p, m);
  }
  return total;
}

void enumerate(const Points& points, std::size_t k, std::vector<std::size_t>& labels, std::size_t i,
               std::size_t used, double& best) {
  if (i == points.size()) {
    if (used == k) best = std::min(best, sse_of(points, labels, k));
    return;
  }
  // Restricted growth strings: each partition is visited once.
  for (std::size_t c = 0; c <= std::min(used, k - 1); ++c) {
    labels[i] = c;
    enumerate(points, k, labels, i + 1, std::max(used, c + 1), best);
  }
}

}  // namespace

double min_sse_partition(const Points& points, std::size_t k) {
  std::vector<std::size_t> labels(points.size());
  double best = std::numeric_limits<double>::infinity();
  enumerate(points, k, labels, 0, 0, best);
  return best;
}

double silhouette(const Points& points, const std::vector<std::size_t>& labels) {
  const std::size_t n = points.size();
  std::set<std::size_t> clusters(labels.begin(), labels.end());
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t own = 0;
    for (std::size_t j = 0; j < n; ++j) own += labels[j] == labels[i];
    if (own == 1) continue;
    double a = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && labels[j] == labels[i]) a += std::sqrt(sq_dist(points[i], points[j]));
    a /= static_cast<double>(own - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c : clusters) {
      if (c == labels[i]) continue;
      double d = 0;
      std::size_t m = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (labels[j] == c) {
          d += std::sqrt(sq_dist(points[i], points[j]));
          ++m;
        }
      }
      b = std::min(b, d / static_cast<double>(m));
    }
    const double denom = std::max(a, b);
    sum += denom > 0 ? (b - a) / denom : 0.0;
  }
  return sum / static_cast<double>(n);
}

double mean_of_max(const Points& items, const Points& concepts) {
  double total = 0;
  for (const auto& item : items) {
    double best = -2;
    for (const auto& c : concepts) best = std::max(best, cosine(item, c));
    total += best;
  }
  return total / static_cast<double>(items.size());
}

std::size_t argmax_cosine(const std::vector<double>& v, const Points& concepts) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < concepts.size(); ++c)
    if (cosine(v, concepts[c]) > cosine(v, concepts[best])) best = c;
  return best;
}

std::vector<std::pair<std::string, double>> full_sort(std::vector<std::pair<std::string, double>> scored) {
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return scored;
}

std::vector<std::size_t> best_injective(const std::vector<std::vector<double>>& sim) {
  const std::size_t rows = sim.size();
  const std::size_t cols = sim.at(0).size();
  std::vector<std::size_t> perm(cols);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> best;
  double best_total = -std::numeric_limits<double>::infinity();
  do {
    double total = 0;
    for (std::size_t r = 0; r < rows; ++r) total += sim[r][perm[r]];
    if (total > best_total) {
      best_total = total;
      best.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(rows));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::map<std::string, std::size_t> count_tokens(const std::string& body, const std::vector<std::string>& words) {
  const std::set<std::string> dictionary(words.begin(), words.end());
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(body);
  u.foldCase();
  icu::UnicodeString norm = nfc->normalize(u, status);
  std::map<std::string, std::size_t> counts;
  icu::UnicodeString token;
  auto flush = [&] {
    if (token.isEmpty()) return;
    std::string s;
    token.toUTF8String(s);
    if (dictionary.count(s)) ++counts[s];
    token.remove();
  };
  for (int32_t i = 0; i < norm.length(); i = norm.moveIndex32(i, 1)) {
    UChar32 c = norm.char32At(i);
    if (u_isalpha(c) || u_isdigit(c) || c == '\'' || c == '-') {
      token.append(c);
    } else {
      flush();
    }
  }
  flush();
  return counts;
}

}  // namespace oracle
