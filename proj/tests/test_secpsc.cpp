#include <gtest/gtest.h>

#include <random>

#include "corpus.hpp"
#include "oracles.hpp"
#include "ordkit/search.hpp"
#include "ordkit/secpsc.hpp"

using namespace ordkit;

namespace {

Elem at(const FinitePoset& p, const std::string& s) { return p.index_of(s); }

void expect_matches_oracle(const FinitePoset& p) {
  const SectionTable t(p);
  const auto o = oracle::sec_table(p);
  for (Elem a = 0; a < p.size(); ++a) {
    for (Elem b = 0; b < p.size(); ++b) EXPECT_EQ(t.value(a, b), o[a][b]) << p.label(a) << "*" << p.label(b);
  }
}

}  // namespace

class GoldenTable : public ::testing::TestWithParam<int> {};

TEST_P(GoldenTable, ReproducesEveryEntry) {
  const int k = GetParam();
  const auto p = corpus::fig(k);
  EXPECT_EQ(io::table_data(SectionTable(p)), corpus::golden_table(k));
  expect_matches_oracle(p);
}

INSTANTIATE_TEST_SUITE_P(Figures, GoldenTable, ::testing::Values(1, 2, 3, 4, 5, 7));

TEST(SecPc, AgreesWithDefinitionOnAllSmallPosets) {
  for (std::size_t n = 1; n <= 5; ++n) {
    for (const auto& p : enumerate_posets(n)) expect_matches_oracle(p);
  }
}

TEST(SecPc, AgreesWithDefinitionOnRandomPosetsProperty) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) expect_matches_oracle(oracle::random_poset(rng, 6 + trial % 4));
}

TEST(SecPc, FigureSixHasNoPseudocomplementOfAWithRespectToZero) {
  const auto p = corpus::fig(6);
  const auto d = sec_pc_detail(p, at(p, "a"), at(p, "0"));
  EXPECT_FALSE(d.value);
  EXPECT_EQ(d.absence(), Absence::no_greatest);
  EXPECT_EQ(d.satisfiers, p.subset_of({"0", "b", "c"}));
  const SectionTable t(p);
  EXPECT_THROW(t.at(at(p, "a"), at(p, "0")), PreconditionError);
}

TEST(SecPc, RelativePseudocomplement) {
  const auto p2 = corpus::fig(2);
  EXPECT_FALSE(rel_pc(p2, at(p2, "c"), at(p2, "a")));
  const auto p3 = corpus::fig(3);
  EXPECT_FALSE(rel_pc(p3, at(p3, "c"), at(p3, "a")));
  const auto chain = build_poset({"0", "m", "1"}, {{"0", "m"}, {"m", "1"}});
  EXPECT_EQ(rel_pc(chain, at(chain, "1"), at(chain, "m")), at(chain, "m"));
}

TEST(Classify, FigureOneIsNotStrong) {
  const auto p = corpus::fig(1);
  const auto c = classify(p);
  EXPECT_TRUE(c.is_sec_pc);
  EXPECT_FALSE(c.is_strongly_sec_pc);
  ASSERT_NE(c.witness("strong"), nullptr);
  EXPECT_EQ(p.labels_of(c.witness("strong")->elements), (std::vector<std::string>{"c", "a"}));
  const SectionTable t(p);
  EXPECT_EQ(t(t(at(p, "c"), at(p, "a")), at(p, "a")), at(p, "a"));
}

TEST(Classify, FiguresTwoThreeFourFive) {
  const auto c2 = classify(corpus::fig(2));
  EXPECT_TRUE(c2.is_strongly_sec_pc && c2.is_lattice);
  EXPECT_FALSE(c2.is_rel_pc);
  const auto c3 = classify(corpus::fig(3));
  EXPECT_TRUE(c3.is_strongly_sec_pc);
  EXPECT_FALSE(c3.is_lattice || c3.is_rel_pc);
  const auto p4 = corpus::fig(4);
  const auto c4 = classify(p4);
  EXPECT_TRUE(c4.is_sec_pc && c4.is_lattice);
  const SectionTable t4(p4);
  EXPECT_EQ(t4(at(p4, "b"), at(p4, "0")), at(p4, "d"));
  EXPECT_EQ(t4(at(p4, "b"), at(p4, "a")), at(p4, "c"));
  EXPECT_FALSE(p4.comparable(at(p4, "d"), at(p4, "c")));
  EXPECT_TRUE(classify(corpus::fig(5)).is_strongly_sec_pc);
  const auto c6 = classify(corpus::fig(6));
  EXPECT_FALSE(c6.is_sec_pc);
  ASSERT_NE(c6.witness("sec_pc:no-greatest"), nullptr);
}

TEST(Classify, SingletonIsEverything) {
  const auto c = classify(build_poset({"1"}, {}));
  EXPECT_TRUE(c.is_sec_pc && c.is_strongly_sec_pc && c.is_rel_pc && c.is_lattice && c.has_top);
}

TEST(Classify, SecPcLatticeWithTopIsStrongProperty) {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (const auto& p : enumerate_posets(n)) {
      const auto c = classify(p);
      if (c.is_sec_pc && c.is_lattice) {
        EXPECT_TRUE(c.is_strongly_sec_pc) << p.name();
      }
      if (c.is_rel_pc && c.has_top) {
        EXPECT_TRUE(c.is_sec_pc) << p.name();
      }
    }
  }
}

TEST(SecondArgument, FigureThreeIsNotMonotone) {
  const auto p = corpus::fig(3);
  const SectionTable t(p);
  EXPECT_EQ(t(at(p, "b"), at(p, "0")), at(p, "c"));
  EXPECT_EQ(t(at(p, "b"), at(p, "a")), at(p, "a"));
  EXPECT_FALSE(p.leq(at(p, "c"), at(p, "a")));
  EXPECT_TRUE(second_argument_nonmonotone(t).has_value());
  EXPECT_FALSE(second_argument_nonmonotone(SectionTable(corpus::fig(5))).has_value());
}

TEST(TableItems, HoldsOnFiguresAndRefusesPartialTables) {
  for (int k : {1, 2, 3, 4, 5, 7}) {
    const auto r = verify_theorem2(SectionTable(corpus::fig(k)));
    EXPECT_TRUE(r.passed()) << k;
    EXPECT_EQ(r.items.size(), 8u);
  }
  EXPECT_THROW(verify_theorem2(SectionTable(corpus::fig(6))), PreconditionError);
}

TEST(TableItems, HoldsOnRandomSecPcPosetsWithTopProperty) {
  std::mt19937_64 rng(99);
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 40; ++trial) {
    const auto p = oracle::random_poset_with_top(rng, 5 + trial % 5);
    const SectionTable t(p);
    if (!t.fully_defined()) continue;
    ++checked;
    EXPECT_TRUE(verify_theorem2(t).passed());
  }
  EXPECT_GT(checked, 0);
}

TEST(Groupoid, RoundTripRecoversThePoset) {
  for (int k : {1, 2, 3, 4, 5, 7}) {
    const auto p = corpus::fig(k);
    const auto g = to_groupoid(SectionTable(p));
    EXPECT_EQ(recover_from_groupoid(g, p.name()), p) << k;
  }
}

TEST(Groupoid, ReportsTheFirstBrokenAxiom) {
  auto g = to_groupoid(SectionTable(corpus::fig(2)));
  auto broken = g;
  broken.star[1][1] = 0;
  try {
    recover_from_groupoid(broken);
    FAIL();
  } catch (const AxiomViolation& e) {
    EXPECT_EQ(e.axiom(), "i");
  }
  // a*b = 1 and b*a = 1 for a != b.
  broken = g;
  broken.star[1][2] = g.one;
  broken.star[2][1] = g.one;
  try {
    recover_from_groupoid(broken);
    FAIL();
  } catch (const AxiomViolation& e) {
    EXPECT_EQ(e.axiom(), "ii");
  }
  // Change a*0 from b to 0: still an order, but the section identity fails.
  broken = g;
  broken.star[1][0] = 0;
  EXPECT_THROW(recover_from_groupoid(broken), AxiomViolation);
}

TEST(LatticeIdentities, HoldOnSecPcLattices) {
  EXPECT_TRUE(verify_lattice_identities(corpus::fig(2)).passed());
  EXPECT_TRUE(verify_lattice_identities(corpus::fig(4)).passed());
  EXPECT_TRUE(verify_lattice_identities(corpus::fig(7)).passed());
  EXPECT_THROW(verify_lattice_identities(corpus::fig(3)), PreconditionError);
}

TEST(Semidistributivity, SecPcPosetsAreCompletelyLSemidistributive) {
  for (int k : {1, 2, 3, 4, 5, 7}) EXPECT_TRUE(is_completely_L_semidistributive(corpus::fig(k)).holds) << k;
  // M3 is not sectionally pseudocomplemented and fails the property.
  const auto m3 = build_poset({"0", "x", "y", "z", "1"},
                              {{"0", "x"}, {"0", "y"}, {"0", "z"}, {"x", "1"}, {"y", "1"}, {"z", "1"}});
  EXPECT_FALSE(classify(m3).is_sec_pc);
  EXPECT_FALSE(is_completely_L_semidistributive(m3).holds);
  std::mt19937_64 rng(1);
  EXPECT_THROW(is_completely_L_semidistributive(oracle::random_poset(rng, 13)), SizeCapExceeded);
}
