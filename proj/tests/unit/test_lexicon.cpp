#include <gtest/gtest.h>

#include "perslex/error.hpp"
#include "perslex/lexicon.hpp"

using namespace perslex;

namespace {

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

std::string ipip_rows(std::size_t n) {
  std::string csv = "text,trait\n";
  for (std::size_t i = 0; i < n; ++i) csv += "Item number " + std::to_string(i) + ",O\n";
  return csv;
}

}  // namespace

TEST(Adjectives, NormalizesAndDeduplicates) {
  LexiconLoadReport report;
  Lexicon lex = parse_adjectives("Kind\nkind\n  bold \n", &report);
  EXPECT_EQ(lex.entries(), (std::vector<std::string>{"kind", "bold"}));
  EXPECT_EQ(report.duplicates, 1u);
  EXPECT_EQ(lex.index_of("bold"), 1u);
}

TEST(Adjectives, EmptyFileIsAnError) {
  EXPECT_EQ(error_code([] { parse_adjectives(""); }), Errc::empty_input);
  EXPECT_EQ(error_code([] { parse_adjectives("\n  \n"); }), Errc::empty_input);
  EXPECT_EQ(error_code([] { load_adjectives("/nonexistent/adjectives.txt"); }), Errc::io);
}

TEST(Adjectives, SerializeRoundTrip) {
  Lexicon lex = parse_adjectives("b\nA\nc\n");
  EXPECT_EQ(parse_adjectives(serialize_lexicon(lex)), lex);
}

TEST(Ipip, ParsesTraitCodedRow) {
  IpipLoadReport report;
  auto items = parse_ipip("text,trait\nAm inadequate,N\n", &report);
  ASSERT_EQ(items.size(), 1u);
  EXPECT_EQ(items[0].text, "Am inadequate");
  EXPECT_EQ(items[0].key, "am inadequate");
  EXPECT_EQ(items[0].trait, Trait::N);
}

TEST(Ipip, EmptyTextAndUnknownTraitAreRejected) {
  IpipLoadReport report;
  auto items = parse_ipip("key,text,trait\n+,,N\n+,Like order,Q\n-,\"Tease people, often\",Agreeableness\n", &report);
  ASSERT_EQ(items.size(), 1u);
  EXPECT_EQ(items[0].text, "Tease people, often");
  EXPECT_EQ(items[0].trait, Trait::A);
  ASSERT_EQ(report.rejected.size(), 2u);
  EXPECT_EQ(report.rejected[0].line, 2u);
}

TEST(Ipip, ItemCountOtherThanFullInventoryWarns) {
  IpipLoadReport short_report, full_report;
  parse_ipip(ipip_rows(20), &short_report);
  parse_ipip(ipip_rows(kIpipItemCount), &full_report);
  EXPECT_EQ(short_report.warnings.size(), 1u);
  EXPECT_TRUE(full_report.warnings.empty());
}

TEST(Ipip, HeaderMustNameTextColumn) {
  EXPECT_EQ(error_code([] { parse_ipip("phrase,trait\nLike order,C\n"); }), Errc::parse);
}

TEST(Csv, QuotedFields) {
  auto f = split_csv_line(R"(a,"b,c","d ""e""",)");
  EXPECT_EQ(f, (std::vector<std::string>{"a", "b,c", "d \"e\"", ""}));
}

TEST(Markers, FiveTraitsOfTen) {
  std::string text;
  for (char t : std::string("OCEAN")) {
    text += t;
    text += ':';
    for (int i = 0; i < 10; ++i) text += std::string(i ? "," : "") + t + "word" + std::to_string(i);
    text += '\n';
  }
  MarkerSet m = parse_markers(text);
  EXPECT_EQ(m.total(), 50u);
  EXPECT_EQ(parse_markers(serialize_markers(m)), m);
}

TEST(Markers, MissingTraitIsAnError) {
  EXPECT_EQ(error_code([] { parse_markers("O:a\nC:b\nE:c\nA:d\n"); }), Errc::missing_input);
  EXPECT_EQ(error_code([] { parse_markers("O:a\nC:b\nE:c\nA:d\nN:\n"); }), Errc::empty_input);
  EXPECT_EQ(error_code([] { parse_markers("O:a\nO:b\nC:b\nE:c\nA:d\nN:e\n"); }), Errc::parse);
}

TEST(Markers, BundledGoldbergListLoads) {
  MarkerSet m = load_markers(std::string(PERSLEX_DATA_DIR) + "/markers/goldberg_50.txt");
  EXPECT_EQ(m.total(), 50u);
  for (Trait t : kTraits) EXPECT_EQ(m.of(t).size(), 10u);
}

TEST(Markers, MissingFromLexiconAreListed) {
  MarkerSet m = parse_markers("O:creative\nC:tidy\nE:bold\nA:kind\nN:moody,touchy\n");
  Lexicon lex = parse_adjectives("creative\nbold\nkind\nmoody\n");
  EXPECT_EQ(missing_markers(m, lex), (std::vector<std::string>{"tidy", "touchy"}));
}

TEST(Traits, CodesAndNames) {
  EXPECT_EQ(parse_trait("e"), Trait::E);
  EXPECT_EQ(parse_trait("Neuroticism"), Trait::N);
  EXPECT_FALSE(parse_trait("X"));
  EXPECT_EQ(trait_code(Trait::O), 'O');
  EXPECT_EQ(trait_name(Trait::C), "Conscientiousness");
}
