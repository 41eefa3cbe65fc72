#include <gtest/gtest.h>

#include <random>
#include <numeric>
#include <set>

#include "ncg/ncg.hpp"
#include "oracle.hpp"

using namespace ncg;

TEST(Patterns, ParseNamesAndMasks) {
  EXPECT_EQ(parse_pattern("leaves-buy").kind, BuyerPattern::Kind::LeavesBuy);
  EXPECT_EQ(parse_pattern("mask:0110").kind, BuyerPattern::Kind::Mixed);
  EXPECT_EQ(parse_pattern("mask:0110").mask, 6u);
  EXPECT_THROW(parse_pattern("mask:012"), InvalidPattern);
  EXPECT_THROW(parse_pattern("mask:"), InvalidPattern);
  EXPECT_THROW(parse_pattern("nobody"), InvalidPattern);
  EXPECT_THROW(parse_shape("hexagon"), InvalidPattern);
  EXPECT_EQ(parse_shape("cycle"), Shape::Cycle);
}

TEST(Standard, ShapesHaveTheRightGraphs) {
  for (int n = 3; n <= 9; ++n) {
    for (const char* pat : {"lowest-buys", "highest-buys", "alternating"}) {
      const auto s = make_standard(Shape::Complete, n, parse_pattern(pat));
      EXPECT_TRUE(is_rational(s));
      EXPECT_TRUE(graph_properties(build_graph(s)).is_complete);
    }
    for (const char* pat : {"leaves-buy", "center-buys", "alternating", "mask:10"}) {
      const auto s = make_standard(Shape::Star, n, parse_pattern(pat));
      EXPECT_TRUE(is_rational(s));
      const auto g = build_graph(s);
      EXPECT_TRUE(graph_properties(g).is_star);
      EXPECT_EQ(g.degree(0), n - 1);
    }
    for (const char* pat : {"each-buys-next", "each-buys-prev", "alternating", "lowest-buys"}) {
      if (std::string(pat) == "alternating" && n % 2 != 0) {
        EXPECT_THROW(make_standard(Shape::Cycle, n, parse_pattern(pat)), InvalidPattern);
      } else {
        const auto c = make_standard(Shape::Cycle, n, parse_pattern(pat));
        EXPECT_TRUE(is_rational(c));
        EXPECT_TRUE(graph_properties(build_graph(c)).is_cycle);
      }
      const auto p = make_standard(Shape::Path, n, parse_pattern(pat));
      EXPECT_TRUE(is_rational(p));
      const auto props = graph_properties(build_graph(p));
      EXPECT_TRUE(props.is_tree);
      EXPECT_EQ(props.diameter, ExtendedDistance(static_cast<std::uint64_t>(n - 1)));
    }
  }
}

TEST(Standard, BuyersFollowThePattern) {
  const auto leaves = make_standard(Shape::Star, 5, parse_pattern("leaves-buy"));
  EXPECT_TRUE(leaves.strategy(0).empty());
  for (Player v = 1; v < 5; ++v) EXPECT_EQ(leaves.strategy(v), std::vector<Player>{0});
  const auto center = make_standard(Shape::Star, 5, parse_pattern("center-buys"));
  EXPECT_EQ(center.strategy(0), (std::vector<Player>{1, 2, 3, 4}));
  // bit j = vertex j: the center buys leaves 1 and 2
  const auto mixed = make_standard(Shape::Star, 5, parse_pattern("mask:0110"));
  EXPECT_EQ(mixed.strategy(0), (std::vector<Player>{1, 2}));
  EXPECT_EQ(mixed.strategy(3), std::vector<Player>{0});
  const auto next = make_standard(Shape::Cycle, 4, parse_pattern("each-buys-next"));
  EXPECT_EQ(next.strategy(3), std::vector<Player>{0});
  const auto prev = make_standard(Shape::Cycle, 4, parse_pattern("each-buys-prev"));
  EXPECT_EQ(prev.strategy(0), std::vector<Player>{3});
  EXPECT_THROW(make_standard(Shape::Complete, 4, parse_pattern("leaves-buy")), InvalidPattern);
}

TEST(Stars, AllRationalStarsAreDistinctStars) {
  for (int n = 3; n <= 6; ++n) {
    const auto stars = all_rational_stars(n);
    EXPECT_EQ(stars.size(), static_cast<std::size_t>(n) << (n - 1));
    std::set<std::vector<std::vector<Player>>> seen;
    for (const auto& s : stars) {
      EXPECT_TRUE(is_rational(s));
      EXPECT_TRUE(graph_properties(build_graph(s)).is_star);
      seen.insert(s.strategies());
    }
    // n = 3: the path has a unique center, so no duplicates either
    EXPECT_EQ(seen.size(), stars.size());
  }
}

TEST(ExampleOne, LayoutSizes) {
  for (int A = 4; A <= 6; ++A)
    for (int k = 1; k <= 4; ++k) {
      const auto lay = example1_layout({A, k});
      EXPECT_EQ(static_cast<int>(lay.middle.size()), A - 1);
      EXPECT_EQ(static_cast<int>(lay.l1.size()), (A - 1) * (k - 1));
      EXPECT_EQ(static_cast<int>(lay.l2.size()), k + 1);
      EXPECT_EQ(lay.root, A * k + 1);
      const auto s = make_example1({A, k});
      EXPECT_EQ(s.n(), A * k + 2);
      EXPECT_EQ(s.strategy(lay.root).size(), static_cast<std::size_t>(k + 1));
      for (Player m : lay.middle) EXPECT_EQ(s.strategy(m).size(), static_cast<std::size_t>(k));
    }
  EXPECT_THROW(make_example1({3, 2}), InvalidParams);
  EXPECT_THROW(make_example1({4, 0}), InvalidParams);
}

TEST(ExampleOne, ClassCostsMatchPlainBfs) {
  for (int A = 4; A <= 6; ++A)
    for (int k = 1; k <= 4; ++k) {
      const auto s = make_example1({A, k});
      const auto lay = example1_layout({A, k});
      const auto want = example1_class_costs({A, k});
      const auto m = oracle::adjacency(s.strategies());
      EXPECT_EQ(oracle::dist_cost(m, lay.root), want.root);
      for (Player i : lay.middle) EXPECT_EQ(oracle::dist_cost(m, i), want.middle);
      for (Player i : lay.l2) EXPECT_EQ(oracle::dist_cost(m, i), want.l2);
      for (Player i : lay.l1) EXPECT_EQ(oracle::dist_cost(m, i), want.l1);
    }
}

TEST(ExampleOne, FourTwoValues) {
  const auto c = example1_class_costs({4, 2});
  EXPECT_EQ(c.root, 12);
  EXPECT_EQ(c.middle, 18);
  EXPECT_EQ(c.l2, 20);
  EXPECT_EQ(c.l1, 26);
}

TEST(ExampleOne, MatcherRecognizesRelabelings) {
  std::mt19937_64 rng(3);
  for (int A = 4; A <= 5; ++A)
    for (int k = 1; k <= 3; ++k) {
      const auto s = make_example1({A, k});
      EXPECT_EQ(match_example1(s), (Example1Params{A, k}));
      const int n = s.n();
      std::vector<Player> perm(static_cast<std::size_t>(n));
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<std::vector<Player>> st(static_cast<std::size_t>(n));
      for (Player i = 0; i < n; ++i)
        for (Player j : s.strategy(i)) st[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])].push_back(perm[static_cast<std::size_t>(j)]);
      EXPECT_EQ(match_example1(StrategyProfile(std::move(st))), (Example1Params{A, k}));
    }
  EXPECT_FALSE(match_example1(make_standard(Shape::Star, 10, parse_pattern("leaves-buy"))));
  EXPECT_FALSE(match_example1(make_standard(Shape::Path, 10, parse_pattern("each-buys-next"))));
}

TEST(HoffmanSingleton, StronglyRegularWithGirthFive) {
  const auto s = make_hoffman_singleton();
  const auto m = oracle::adjacency(s.strategies());
  EXPECT_TRUE(oracle::is_rational(s.strategies()));
  int edges = 0;
  for (int u = 0; u < 50; ++u) {
    int deg = 0;
    for (int v = 0; v < 50; ++v) deg += m[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
    EXPECT_EQ(deg, 7);
    edges += deg;
    for (int v = u + 1; v < 50; ++v) {
      int common = 0;
      for (int w = 0; w < 50; ++w)
        common += m[static_cast<std::size_t>(u)][static_cast<std::size_t>(w)] & m[static_cast<std::size_t>(w)][static_cast<std::size_t>(v)];
      EXPECT_EQ(common, m[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] ? 0 : 1);
    }
  }
  EXPECT_EQ(edges / 2, 175);
  for (int u = 0; u < 50; ++u) EXPECT_EQ(oracle::dist_cost(m, u), 91);
  EXPECT_FALSE(find_triangle(build_graph(s)));
}

TEST(HoffmanSingleton, OutDegrees) {
  const auto s = make_hoffman_singleton();
  for (Player i = 0; i < 25; ++i) EXPECT_EQ(s.strategy(i).size(), 4u);
  for (Player i = 25; i < 50; ++i) EXPECT_EQ(s.strategy(i).size(), 3u);
}

TEST(Cfip, ProfileShape) {
  EXPECT_EQ(make_cfip3_profile(), StrategyProfile({{1}, {}, {0}}));
  const auto s = make_cfip3_profile(5);
  EXPECT_EQ(s.strategy(4), (std::vector<Player>{0, 1, 2}));
  EXPECT_THROW(make_cfip3_profile(2), InvalidParams);
}

TEST(RationalProfiles, EnumerationMatchesBaseThreeCodes) {
  for (int n = 3; n <= 4; ++n) {
    std::uint64_t code = 0;
    for_each_rational_profile(n, [&](const std::vector<detail::Mask>& out) {
      const auto s = detail::from_masks(out);
      EXPECT_EQ(s.strategies(), oracle::rational_profile(n, code)) << code;
      ++code;
      return true;
    });
    EXPECT_EQ(code, oracle::pow3(n * (n - 1) / 2));
  }
}

TEST(RandomGenerators, Contracts) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 200; ++t) {
    const int n = 3 + static_cast<int>(rng() % 10);
    EXPECT_TRUE(is_rational(random_rational_profile(n, 0.5, rng)));
    const auto tree = random_tree_profile(n, rng);
    EXPECT_TRUE(graph_properties(build_graph(tree)).is_tree);
    EXPECT_TRUE(is_rational(tree));
    const auto c = random_connected_rational_profile(n, 0.2, rng);
    EXPECT_TRUE(is_rational(c));
    EXPECT_TRUE(is_connected(build_graph(c)));
  }
}
