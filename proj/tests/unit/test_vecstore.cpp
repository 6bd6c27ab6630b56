#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "perslex/error.hpp"
#include "perslex/vecstore.hpp"

using namespace perslex;

namespace {

std::vector<double> v(std::initializer_list<double> xs) { return xs; }

template <typename Fn>
Errc error_code(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected perslex::Error";
  return Errc::io;
}

VectorSet sample_set() {
  VectorSet set(3);
  set.add("Kind", v({1.0, 2.0, 3.0}));
  set.add("bold", v({-0.5, 0.25, 1e-7}));
  set.add("am inadequate", v({0.0, 0.0, 1.0}));
  return set;
}

}  // namespace

TEST(VectorFile, TwoRecordsOfDimThree) {
  VectorLoadInfo info;
  VectorSet set = parse_vectors("kind\t1 2 3\nbold\t4 5 6\n", &info);
  EXPECT_EQ(set.size(), 2u);
  EXPECT_EQ(set.dim(), 3u);
  EXPECT_EQ(info.format, VectorFormat::text);
}

TEST(VectorFile, MixedDimensionIsRejected) {
  EXPECT_EQ(error_code([] { parse_vectors("a\t1 2 3\nb\t1 2 3 4\n"); }), Errc::dimension_mismatch);
}

TEST(VectorFile, DuplicateAfterNormalizationIsRejected) {
  EXPECT_EQ(error_code([] { parse_vectors("Kind\t1 2\nkind \t1 2\n"); }), Errc::duplicate_id);
}

TEST(VectorFile, NonFiniteIsRejected) {
  EXPECT_EQ(error_code([] { parse_vectors("a\t1 nan\n"); }), Errc::non_finite);
  EXPECT_EQ(error_code([] { parse_vectors("a\t1 inf\n"); }), Errc::non_finite);
}

TEST(VectorFile, EmptyAndMalformedInputs) {
  EXPECT_EQ(error_code([] { parse_vectors("# only a comment\n"); }), Errc::empty_input);
  EXPECT_EQ(error_code([] { parse_vectors("a\t1 two 3\n"); }), Errc::parse);
  EXPECT_EQ(error_code([] { load_vectors("/nonexistent/vectors.tsv"); }), Errc::io);
}

TEST(VectorFile, TextRoundTripIsExact) {
  VectorSet set = sample_set();
  EXPECT_EQ(parse_vectors(serialize_vectors(set, VectorFormat::text)), set);
}

TEST(VectorFile, BinaryRoundTripKeepsFloatPrecision) {
  VectorSet set = sample_set();
  VectorLoadInfo info;
  VectorSet back = parse_vectors(serialize_vectors(set, VectorFormat::binary), &info);
  EXPECT_EQ(info.format, VectorFormat::binary);
  ASSERT_EQ(back.ids(), set.ids());
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t d = 0; d < set.dim(); ++d) {
      EXPECT_EQ(back.vector(i)[d], static_cast<double>(static_cast<float>(set.vector(i)[d])));
    }
    EXPECT_NEAR(cosine(back.vector(i), set.vector(i)), 1.0, 1e-12);
  }
}

TEST(VectorFile, BinaryLayoutIsLittleEndian) {
  VectorSet set(1);
  set.add("a", v({1.0}));
  const std::string bytes = serialize_vectors(set, VectorFormat::binary);
  const std::string expected("EMBV\x01\x01\x00\x00\x00\x01\x00\x00\x00\x01\x00" "a\x00\x00\x80\x3f", 20);
  EXPECT_EQ(bytes, expected);
}

TEST(VectorFile, TruncatedBinaryIsRejected) {
  std::string bytes = serialize_vectors(sample_set(), VectorFormat::binary);
  bytes.pop_back();
  EXPECT_EQ(error_code([&] { parse_vectors(bytes); }), Errc::parse);
}

TEST(VectorFile, SaveAndLoadThroughDisk) {
  auto dir = std::filesystem::temp_directory_path() / "perslex-vecstore-test";
  std::filesystem::create_directories(dir);
  VectorSet set = sample_set();
  save_vectors(set, dir / "v.bin", VectorFormat::binary);
  save_vectors(set, dir / "v.tsv", VectorFormat::text);
  EXPECT_EQ(load_vectors(dir / "v.tsv"), set);
  EXPECT_EQ(load_vectors(dir / "v.bin").size(), 3u);
  std::filesystem::remove_all(dir);
}

TEST(VectorSetLookup, FindsRawAndNormalizedKeys) {
  VectorSet set = sample_set();
  EXPECT_EQ(set.find("KIND"), 0u);
  EXPECT_EQ(set.find(" Am Inadequate "), 2u);
  EXPECT_FALSE(set.find("cruel"));
  std::vector<std::string> missing;
  std::vector<std::string> want = {"bold", "cruel", "kind"};
  VectorSet sub = set.subset(want, &missing);
  EXPECT_EQ(sub.ids(), (std::vector<std::string>{"bold", "kind"}));
  EXPECT_EQ(missing, std::vector<std::string>{"cruel"});
}

TEST(Standardize, SingleRecordIsAllZeroAndConstant) {
  VectorSet set(3);
  set.add("a", v({1.0, -2.0, 5.0}));
  ScaledSet s = standardize(set);
  for (std::size_t d = 0; d < 3; ++d) EXPECT_EQ(s.scaled(0, d), 0.0);
  EXPECT_EQ(s.scaling.constant_dims, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Standardize, HandOracle) {
  fixtures::Points pts = {{0, 0}, {2, 0}};
  ScaledSet s = standardize(fixtures::to_matrix(pts));
  EXPECT_EQ(s.scaling.mean, (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(s.scaling.stddev, (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(s.scaled(0, 0), -1.0);
  EXPECT_EQ(s.scaled(1, 0), 1.0);
  EXPECT_EQ(s.scaled(0, 1), 0.0);
  EXPECT_EQ(s.scaling.constant_dims, std::vector<std::size_t>{1});
}

TEST(Standardize, ColumnMeansVanishAndInverseRestores) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto pts = fixtures::random_points(25, 7, seed, 5.0);
    for (auto& p : pts) p[3] = 2.5;  // one constant dimension
    ScaledSet s = standardize(fixtures::to_matrix(pts));
    for (std::size_t d = 0; d < 7; ++d) {
      double m = 0;
      for (std::size_t i = 0; i < 25; ++i) m += s.scaled(i, d);
      EXPECT_LT(std::abs(m / 25), 1e-9);
    }
    for (std::size_t i = 0; i < 25; ++i) {
      auto back = s.scaling.inverse(s.scaled.row(i));
      for (std::size_t d = 0; d < 7; ++d) EXPECT_NEAR(back[d], pts[i][d], 1e-9);
    }
    EXPECT_TRUE(s.scaling.is_constant(3));
  }
}

TEST(Similarity, CosineExamples) {
  auto a = v({1, 0}), b = v({0, 1}), c = v({1, 2}), d = v({2, 1});
  EXPECT_DOUBLE_EQ(cosine(c, c), 1.0);
  EXPECT_EQ(cosine(a, b), 0.0);
  EXPECT_NEAR(cosine(c, d), 0.8, 1e-15);
  auto zero = v({0, 0});
  EXPECT_EQ(error_code([&] { cosine(zero, a); }), Errc::undefined_similarity);
  auto three = v({1, 2, 3});
  EXPECT_EQ(error_code([&] { cosine(three, a); }), Errc::dimension_mismatch);
}

TEST(Similarity, CosineIsSymmetricAndBounded) {
  auto pts = fixtures::random_points(40, 5, 7);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double s = cosine(pts[i], pts[i + 1]);
    EXPECT_EQ(s, cosine(pts[i + 1], pts[i]));
    EXPECT_LE(std::abs(s), 1.0);
    EXPECT_NEAR(s, oracle::cosine(pts[i], pts[i + 1]), 1e-12);
  }
}

TEST(Centroid, Examples) {
  auto a = v({3, -1});
  std::vector<std::span<const double>> one = {a};
  EXPECT_EQ(centroid(one), a);
  auto p = v({0, 0}), q = v({2, 2});
  std::vector<std::span<const double>> two = {p, q};
  EXPECT_EQ(centroid(two), v({1, 1}));
  std::vector<std::span<const double>> none;
  EXPECT_EQ(error_code([&] { centroid(none); }), Errc::empty_input);
}

TEST(Centroid, MatchesPerCoordinateMeanOracle) {
  fixtures::Points pts = {{1.5, -2, 0.25}, {3, 4, -1}, {-7, 0.5, 2}, {0.125, 9, 3}};
  std::vector<std::span<const double>> spans(pts.begin(), pts.end());
  auto c = centroid(spans);
  auto expected = oracle::mean(pts);
  for (std::size_t d = 0; d < 3; ++d) EXPECT_NEAR(c[d], expected[d], 1e-15);
  std::vector<std::size_t> members = {0, 2};
  auto partial = centroid(fixtures::to_matrix(pts), members);
  EXPECT_EQ(partial, v({(1.5 - 7) / 2, (-2 + 0.5) / 2, (0.25 + 2) / 2}));
}
