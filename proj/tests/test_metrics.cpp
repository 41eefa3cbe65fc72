#include <gtest/gtest.h>

#include "ncg/ncg.hpp"
#include "oracle.hpp"

using namespace ncg;

TEST(Optimum, ClosedFormEqualsBruteForce) {
  for (int n = 3; n <= 5; ++n)
    for (const Rational& a : {Rational(1, 2), Rational(1), Rational(3, 2), Rational(2), Rational(3), Rational(4)}) {
      const GameParams params(n, a);
      const auto closed = social_optimum_cost(params);
      EXPECT_EQ(closed.cost, social_optimum_cost(params, OptimumMode::BruteForce).cost) << n << " " << a;
      EXPECT_EQ(oracle::social_cost(closed.witness.strategies(), a), closed.cost);
    }
}

TEST(Optimum, TieAtTwo) {
  const GameParams params(5, Rational(2));
  const Rational complete = Rational(2 * 10 + 20);
  const Rational star = Rational(2 * 4 + 2 * 16);
  EXPECT_EQ(complete, star);
  EXPECT_EQ(social_optimum_cost(params).cost, complete);
}

TEST(Optimum, BruteForceRejectsLargeN) {
  EXPECT_THROW(social_optimum_cost(GameParams(7, Rational(1)), OptimumMode::BruteForce), TooLarge);
}

TEST(Enumeration, MatchesOracleOnThreeAndFourPlayers) {
  for (int n = 3; n <= 4; ++n)
    for (const Rational& a : {Rational(1, 2), Rational(1), Rational(3, 2), Rational(5, 2)}) {
      const auto en = enumerate_strong_equilibria(GameParams(n, a));
      std::vector<std::vector<std::vector<Player>>> got;
      for (const auto& s : en.equilibria) got.push_back(s.strategies());
      std::vector<std::vector<std::vector<Player>>> want;
      for (std::uint64_t code = 0; code < oracle::pow3(n * (n - 1) / 2); ++code) {
        const auto raw = oracle::rational_profile(n, code);
        if (!oracle::has_improving_coalition(raw, a)) want.push_back(raw);
      }
      std::sort(got.begin(), got.end());
      std::sort(want.begin(), want.end());
      EXPECT_EQ(got, want) << n << " " << a;
    }
}

TEST(Enumeration, PrefilterDoesNotChangeTheResult) {
  const GameParams params(5, Rational(3, 2));
  const auto with = enumerate_strong_equilibria(params, {true, {}});
  const auto without = enumerate_strong_equilibria(params, {false, {}});
  EXPECT_EQ(with.equilibria.size(), without.equilibria.size());
  EXPECT_LT(with.candidates_checked, without.candidates_checked);
  EXPECT_EQ(without.profiles_scanned, 59049u);
}

TEST(Enumeration, ThreadCountDoesNotMatter) {
  const GameParams params(4, Rational(1));
  const auto a = enumerate_strong_equilibria(params, {true, Parallelism{1}});
  const auto b = enumerate_strong_equilibria(params, {true, Parallelism{4}});
  ASSERT_EQ(a.equilibria.size(), b.equilibria.size());
  for (std::size_t k = 0; k < a.equilibria.size(); ++k) EXPECT_EQ(a.equilibria[k], b.equilibria[k]);
}

TEST(Spoa, SmallCasesMatchClosedForm) {
  for (int n = 3; n <= 4; ++n)
    for (const Rational& a : {Rational(1, 2), Rational(1), Rational(3, 2), Rational(5, 4)}) {
      const auto r = strong_price_of_anarchy(GameParams(n, a));
      ASSERT_TRUE(r.has_equilibrium());
      ASSERT_EQ(r.prediction.kind, ClosedFormSpoa::Kind::Value);
      EXPECT_EQ(r.ratio, r.prediction.value) << n << " " << a;
    }
}

TEST(Spoa, UndefinedWithoutEquilibria) {
  const auto r = strong_price_of_anarchy(GameParams(5, Rational(3, 2)));
  EXPECT_FALSE(r.has_equilibrium());
  EXPECT_EQ(r.prediction.kind, ClosedFormSpoa::Kind::Undefined);
}

TEST(Spoa, ClosedFormValues) {
  EXPECT_EQ(spoa_closed_form(GameParams(5, Rational(1))).value, Rational(17, 15));
  EXPECT_EQ(spoa_closed_form(GameParams(9, Rational(1))).value, Rational(29, 27));
  EXPECT_EQ(spoa_closed_form(GameParams(3, Rational(3, 2))).value, Rational(22, 21));
  EXPECT_EQ(spoa_closed_form(GameParams(4, Rational(3, 2))).value, Rational(22, 21));
  EXPECT_EQ(spoa_closed_form(GameParams(8, Rational(3))).kind, ClosedFormSpoa::Kind::Bounds);
}

TEST(Spoa, WorstAlphaOneEquilibriumHasSpanningTreeComplement) {
  const auto r = strong_price_of_anarchy(GameParams(5, Rational(1)));
  ASSERT_TRUE(r.worst_profile);
  const auto g = build_graph(*r.worst_profile);
  // 34 = 40 - |E| forces |E| = 6, so the complement forest has 4 edges
  UndirectedGraph comp(5);
  for (Player u = 0; u < 5; ++u)
    for (Player v = u + 1; v < 5; ++v)
      if (!g.has_edge(u, v)) comp.add_edge(u, v);
  const auto p = graph_properties(comp);
  EXPECT_TRUE(p.is_tree);
  EXPECT_EQ(r.worst_se, Rational(34));
}

TEST(ExampleOneRatio, KnownValuesAndMonotone) {
  const auto r4 = example1_ratio(4);
  EXPECT_EQ(r4.cost_se, Rational(1424));
  EXPECT_EQ(r4.cost_opt, Rational(1190));
  const auto r10 = example1_ratio(10);
  EXPECT_EQ(r10.cost_se, Rational(55748));
  EXPECT_EQ(r10.cost_opt, Rational(41006));
  Rational prev(0);
  for (int x = 4; x <= 20; ++x) {
    const auto r = example1_ratio(x);
    EXPECT_TRUE(r.bounds_hold()) << x;
    EXPECT_GT(r.ratio, prev);
    EXPECT_LT(r.ratio, Rational(3, 2));
    // independent recomputation by BFS
    EXPECT_EQ(oracle::social_cost(make_example1({x, x}).strategies(), r.alpha), r.cost_se);
    prev = r.ratio;
  }
  EXPECT_THROW(example1_ratio(3), InvalidParams);
}
