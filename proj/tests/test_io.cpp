#include <gtest/gtest.h>

#include <random>

#include "corpus.hpp"
#include "oracles.hpp"
#include "ordkit/io.hpp"

using namespace ordkit;

TEST(PosetFormat, ParsesCommentsChainsAndRepeatedLines) {
  const auto p = io::parse_poset(
      "# a chain and a side branch\n"
      "poset demo\n"
      "elements: 0 a\n"
      "elements: b 1   # more\n"
      "covers: 0<a<1\n"
      "covers: 0<b b<1\n");
  EXPECT_EQ(p.name(), "demo");
  EXPECT_EQ(p.size(), 4u);
  EXPECT_TRUE(p.leq(p.index_of("0"), p.index_of("1")));
  EXPECT_EQ(hasse_covers(p).size(), 4u);
}

TEST(PosetFormat, ErrorsCarryLineNumbers) {
  try {
    io::parse_poset("poset x\nelements: a b\nwhat is this\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    io::parse_poset("poset x\nelements: a b\ncovers: a<\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(io::parse_poset("elements: a\n"), ParseError);
  EXPECT_THROW(io::parse_poset("poset x\ncovers: a<b\n"), ParseError);
  EXPECT_THROW(io::parse_poset("poset x\nelements: a b\ncovers: a<c\n"), UnknownLabel);
  EXPECT_THROW(io::parse_poset("poset x\nelements: a b\ncovers: a<b b<a\n"), CycleError);
}

TEST(PosetFormat, RoundTripProperty) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 80; ++trial) {
    auto p = oracle::random_poset(rng, 1 + trial % 10);
    EXPECT_EQ(io::parse_poset(io::format_poset(p)), p);
  }
}

TEST(PosetFormat, CompletionLabelsRoundTrip) {
  const auto dm = dm_completion(corpus::fig(3));
  EXPECT_EQ(io::parse_poset(io::format_poset(dm.lattice)), dm.lattice);
  const auto y = dm_yoked_family(corpus::yokedexam());
  const auto f = y.to_sum_family();
  const auto back = io::parse_sum_family(io::format_sum_family(f));
  EXPECT_EQ(back.glue, f.glue);
  EXPECT_EQ(build_sum(back).poset, build_sum(f).poset);
}

TEST(SumFormat, ParsesGlue) {
  const auto f = io::parse_sum_family(
      "family g\n"
      "summand lo\nelements: 0 m\ncovers: 0<m\n"
      "summand hi\nelements: m2 1\ncovers: m2<1\n"
      "glue: hi.m2 = lo.m\n");
  ASSERT_EQ(f.glue.size(), 1u);
  EXPECT_EQ(f.glue[0].lower, 0u);
  EXPECT_EQ(f.glue[0].upper_elem, 0u);
  EXPECT_EQ(build_sum(f).poset.size(), 3u);
  EXPECT_THROW(io::parse_sum_family("summand 1\nelements: a\nglue: 3.a = 1.a\n"), ParseError);
  EXPECT_THROW(io::parse_sum_family("elements: a\n"), ParseError);
}

TEST(TableFormat, TextAndJsonAgree) {
  for (int k = 1; k <= 7; ++k) {
    const auto d = io::table_data(SectionTable(corpus::fig(k)));
    const auto text = io::format_table(d);
    EXPECT_EQ(io::parse_table(text), d) << k;
    EXPECT_EQ(io::table_from_json(io::table_to_json(d)), d) << k;
    EXPECT_EQ(io::parse_table(text), io::table_from_json(nlohmann::json::parse(io::table_to_json(d).dump())));
  }
}

TEST(TableFormat, UndefinedEntriesUseAnEmDash) {
  const auto text = io::format_table(io::table_data(SectionTable(corpus::fig(6))));
  EXPECT_NE(text.find("—"), std::string::npos);
  const auto d = io::parse_table(text);
  EXPECT_FALSE(d.cells[1][0]);
  EXPECT_EQ(d.elements[1], "a");
}

TEST(TableFormat, RejectsMalformedGrids) {
  EXPECT_THROW(io::parse_table("x a b\n"), ParseError);
  EXPECT_THROW(io::parse_table("* a b\na 1 1\n"), ParseError);
  EXPECT_THROW(io::parse_table("* a b\na a b\nb z a\n"), UnknownLabel);
  EXPECT_THROW(io::parse_table("* a b\nb a b\na b a\n"), ParseError);
}

TEST(PartitionFormat, ParsesLabels) {
  const auto p = corpus::fig(2);
  const auto part = io::parse_partition(p, R"({"classes": [["0","a"],["b"],["c","1"]]})");
  EXPECT_EQ(part.class_count(), 3u);
  EXPECT_TRUE(part.same(p.index_of("c"), p.index_of("1")));
  EXPECT_EQ(io::parse_partition(p, io::partition_to_json(p, part).dump()), part);
  EXPECT_THROW(io::parse_partition(p, "{"), ParseError);
  EXPECT_THROW(io::parse_partition(p, R"({"classes": [["0","q"]]})"), UnknownLabel);
  EXPECT_THROW(io::parse_partition(p, R"({"classes": [["0"]]})"), InputError);
}

TEST(Dot, ListsEveryCover) {
  const auto dot = io::to_dot(corpus::fig(5));
  EXPECT_NE(dot.find("rankdir=BT"), std::string::npos);
  EXPECT_NE(dot.find("\"a\" -> \"1\""), std::string::npos);
  EXPECT_EQ(std::count(dot.begin(), dot.end(), '>'), 3);
}

TEST(Sidecar, DescribesEveryCut) {
  const auto p = corpus::fig(3);
  const auto dm = dm_completion(p);
  const auto j = io::dm_sidecar(p, dm);
  ASSERT_EQ(j["cuts"].size(), 8u);
  EXPECT_EQ(j["cuts"][7]["element"], "L(d,e)");
  EXPECT_EQ(j["cuts"][7]["members"], nlohmann::json({"0", "a", "b", "c"}));
  EXPECT_FALSE(j["cuts"][7]["principal"].get<bool>());
  EXPECT_EQ(j["embedding"]["c"], "c");
}
