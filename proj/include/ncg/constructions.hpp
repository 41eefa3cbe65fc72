#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ncg/cost.hpp"
#include "ncg/detail/bits.hpp"
#include "ncg/game.hpp"
#include "ncg/graph.hpp"

namespace ncg {

class InvalidPattern : public Error {
 public:
  using Error::Error;
};

enum class Shape { Complete, Star, Cycle, Path };

/// Who pays for each edge of a standard shape.
struct BuyerPattern {
  enum class Kind {
    LeavesBuy,     // star: every leaf buys its edge to the center
    CenterBuys,    // star: the center buys every edge
    Mixed,         // star: the center buys the edges to the leaves in `mask`
    Alternating,   // shape-specific alternation, see make_standard
    EachBuysNext,  // cycle/path: i buys i+1
    EachBuysPrev,  // cycle/path: i buys i-1
    LowestBuys,    // lower-indexed endpoint buys
    HighestBuys,   // higher-indexed endpoint buys
  };
  Kind kind = Kind::LowestBuys;
  std::uint64_t mask = 0;

  friend bool operator==(const BuyerPattern&, const BuyerPattern&) = default;
};

inline Shape parse_shape(std::string_view s) {
  if (s == "complete") return Shape::Complete;
  if (s == "star") return Shape::Star;
  if (s == "cycle") return Shape::Cycle;
  if (s == "path") return Shape::Path;
  throw InvalidPattern("unknown shape '" + std::string(s) + "'");
}

/// Accepts leaves-buy, center-buys, alternating, each-buys-next,
/// each-buys-prev, lowest-buys, highest-buys and mask:<bits>, where bit j of
/// the binary string (rightmost = vertex 0) marks a leaf bought by the center.
inline BuyerPattern parse_pattern(std::string_view s) {
  using K = BuyerPattern::Kind;
  if (s == "leaves-buy") return {K::LeavesBuy, 0};
  if (s == "center-buys") return {K::CenterBuys, 0};
  if (s == "alternating") return {K::Alternating, 0};
  if (s == "each-buys-next") return {K::EachBuysNext, 0};
  if (s == "each-buys-prev") return {K::EachBuysPrev, 0};
  if (s == "lowest-buys") return {K::LowestBuys, 0};
  if (s == "highest-buys") return {K::HighestBuys, 0};
  if (s.starts_with("mask:")) {
    std::uint64_t m = 0;
    const auto bits = s.substr(5);
    if (bits.empty() || bits.size() > 64) throw InvalidPattern("bad mask pattern '" + std::string(s) + "'");
    for (char c : bits) {
      if (c != '0' && c != '1') throw InvalidPattern("bad mask pattern '" + std::string(s) + "'");
      m = (m << 1) | static_cast<std::uint64_t>(c - '0');
    }
    return {K::Mixed, m};
  }
  throw InvalidPattern("unknown buyer pattern '" + std::string(s) + "'");
}

inline std::string_view default_pattern(Shape shape) {
  switch (shape) {
    case Shape::Star: return "leaves-buy";
    case Shape::Cycle:
    case Shape::Path: return "each-buys-next";
    case Shape::Complete: return "lowest-buys";
  }
  return "lowest-buys";
}

/// Rational profile forming K_n, the star centred at 0, the cycle
/// 0-1-...-(n-1)-0 or the path 0-1-...-(n-1).
inline StrategyProfile make_standard(Shape shape, int n, BuyerPattern pattern) {
  using K = BuyerPattern::Kind;
  if (n < 3) throw InvalidParams("standard shapes need n >= 3");
  std::vector<std::vector<Player>> st(static_cast<std::size_t>(n));
  auto buy = [&](Player i, Player j) { st[static_cast<std::size_t>(i)].push_back(j); };
  auto bad = [&] { return InvalidPattern("buyer pattern not applicable to this shape"); };
  auto by_endpoint = [&](Player u, Player v) {
    // u < v
    if (pattern.kind == K::LowestBuys) buy(u, v);
    else if (pattern.kind == K::HighestBuys) buy(v, u);
    else throw bad();
  };
  switch (shape) {
    case Shape::Star:
      for (Player leaf = 1; leaf < n; ++leaf) {
        bool center_pays = false;
        switch (pattern.kind) {
          case K::LeavesBuy: center_pays = false; break;
          case K::CenterBuys: center_pays = true; break;
          case K::Alternating: center_pays = leaf % 2 == 0; break;
          case K::Mixed:
            if (pattern.mask & 1u) throw InvalidPattern("mask bit 0 refers to the star center");
            if (n < 64 && (pattern.mask >> n) != 0) throw InvalidPattern("mask refers to missing leaves");
            center_pays = (pattern.mask >> leaf) & 1u;
            break;
          default: throw bad();
        }
        if (center_pays) buy(0, leaf);
        else buy(leaf, 0);
      }
      break;
    case Shape::Cycle:
      for (Player i = 0; i < n; ++i) {
        const Player next = (i + 1) % n;
        switch (pattern.kind) {
          case K::EachBuysNext: buy(i, next); break;
          case K::EachBuysPrev: buy(next, i); break;
          case K::Alternating:
            if (n % 2 != 0) throw InvalidPattern("alternating cycle needs even n");
            if (i % 2 == 0) buy(i, next);
            else buy(next, i);
            break;
          default: by_endpoint(std::min(i, next), std::max(i, next));
        }
      }
      break;
    case Shape::Path:
      for (Player i = 0; i + 1 < n; ++i) {
        switch (pattern.kind) {
          case K::EachBuysNext: buy(i, i + 1); break;
          case K::EachBuysPrev: buy(i + 1, i); break;
          case K::Alternating:
            if (i % 2 == 0) buy(i, i + 1);
            else buy(i + 1, i);
            break;
          default: by_endpoint(i, i + 1);
        }
      }
      break;
    case Shape::Complete:
      for (Player u = 0; u < n; ++u)
        for (Player v = u + 1; v < n; ++v) {
          if (pattern.kind == K::Alternating) {
            if ((u + v) % 2 == 0) buy(u, v);
            else buy(v, u);
          } else {
            by_endpoint(u, v);
          }
        }
      break;
  }
  return StrategyProfile(std::move(st));
}

/// Every rational profile whose graph is a star: each center and each subset
/// of leaves whose edges the center buys. n * 2^(n-1) profiles.
inline std::vector<StrategyProfile> all_rational_stars(int n) {
  if (n < 3 || n > 20) throw InvalidParams("all_rational_stars supports 3 <= n <= 20");
  std::vector<StrategyProfile> out;
  for (Player center = 0; center < n; ++center) {
    std::vector<Player> leaves;
    for (Player v = 0; v < n; ++v)
      if (v != center) leaves.push_back(v);
    for (std::uint32_t m = 0; m < (1u << (n - 1)); ++m) {
      std::vector<std::vector<Player>> st(static_cast<std::size_t>(n));
      for (std::size_t t = 0; t < leaves.size(); ++t) {
        if ((m >> t) & 1u) st[static_cast<std::size_t>(center)].push_back(leaves[t]);
        else st[static_cast<std::size_t>(leaves[t])].push_back(center);
      }
      out.emplace_back(std::move(st));
    }
  }
  return out;
}

struct Example1Params {
  int A = 4;
  int k = 1;

  [[nodiscard]] int n() const { return A * k + 2; }
  void validate() const {
    if (A < 4) throw InvalidParams("the diameter-4 tree family needs A >= 4");
    if (k < 1) throw InvalidParams("the diameter-4 tree family needs k >= 1");
  }
  friend bool operator==(const Example1Params&, const Example1Params&) = default;
};

/// Node classes of the diameter-4 tree (0-based): middle players 0..A-2,
/// L1 = A-1 .. (A-1)k-1, L2 = (A-1)k .. n-2, root R = n-1.
struct Example1Layout {
  Example1Params params;
  Player root = 0;
  std::vector<Player> middle;
  std::vector<Player> l1;
  std::vector<Player> l2;
};

inline Example1Layout example1_layout(Example1Params p) {
  p.validate();
  Example1Layout lay{p, p.n() - 1, {}, {}, {}};
  for (Player i = 0; i < p.A - 1; ++i) lay.middle.push_back(i);
  for (Player i = p.A - 1; i < (p.A - 1) * p.k; ++i) lay.l1.push_back(i);
  for (Player i = (p.A - 1) * p.k; i < p.n() - 1; ++i) lay.l2.push_back(i);
  return lay;
}

/// R buys the k+1 edges to L2; middle player m buys R and the contiguous
/// block L1[m(k-1) .. (m+1)(k-1)).
inline StrategyProfile make_example1(Example1Params p) {
  const auto lay = example1_layout(p);
  std::vector<std::vector<Player>> st(static_cast<std::size_t>(p.n()));
  st[static_cast<std::size_t>(lay.root)] = lay.l2;
  for (Player m = 0; m < p.A - 1; ++m) {
    auto& s = st[static_cast<std::size_t>(m)];
    for (int t = 0; t < p.k - 1; ++t) s.push_back(lay.l1[static_cast<std::size_t>(m * (p.k - 1) + t)]);
    s.push_back(lay.root);
  }
  return StrategyProfile(std::move(st));
}

/// Closed-form distance costs per node class: {R, middle, L2, L1}.
struct Example1ClassCosts {
  std::int64_t root, middle, l2, l1;
};

inline Example1ClassCosts example1_class_costs(Example1Params p) {
  p.validate();
  const std::int64_t n = p.n(), A = p.A, k = p.k;
  return {2 * n - A - k - 2, 3 * n - A - 3 * k - 2, 3 * n - A - k - 4, 4 * n - A - 3 * k - 4};
}

/// Recognizes the diameter-4 tree structure up to relabeling: a root buying k+1
/// pendant edges, A-1 players each buying the root plus k-1 pendant edges,
/// and nobody else buying. Returns the parameters when it matches.
inline std::optional<Example1Params> match_example1(const StrategyProfile& s) {
  const int n = s.n();
  if (!is_rational(s)) return std::nullopt;
  const auto g = build_graph(s);
  if (g.edge_count() + 1 != static_cast<std::size_t>(n) || !is_connected(g)) return std::nullopt;
  std::vector<Player> buyers;
  for (Player i = 0; i < n; ++i)
    if (!s.strategy(i).empty()) buyers.push_back(i);
  const int A = static_cast<int>(buyers.size());
  if (A < 4 || (n - 2) % A != 0) return std::nullopt;
  const int k = (n - 2) / A;
  auto pendant = [&](Player v) { return g.degree(v) == 1 && s.strategy(v).empty(); };
  for (Player root : buyers) {
    if (static_cast<int>(s.strategy(root).size()) != k + 1) continue;
    bool ok = std::all_of(s.strategy(root).begin(), s.strategy(root).end(), pendant);
    for (Player b : buyers) {
      if (!ok) break;
      if (b == root) continue;
      const auto& sb = s.strategy(b);
      if (static_cast<int>(sb.size()) != k || !s.buys(b, root)) {
        ok = false;
        break;
      }
      for (Player t : sb)
        if (t != root && !pendant(t)) ok = false;
    }
    if (ok) return Example1Params{A, k};
  }
  return std::nullopt;
}

/// Hoffman-Singleton graph from five pentagons P_h (vertex 5h+j, j ~ j+-1)
/// and five pentagrams Q_i (vertex 25+5i+j, j ~ j+-2), with P_{h,j} ~
/// Q_{i, hi+j mod 5}. Each pentagon/pentagram vertex buys its successor edge
/// (j -> j+1, resp. j -> j+2); P_{h,j} buys the cross edges to Q_i for
/// i - h mod 5 in {0,1,2}. Pentagon vertices buy 4 edges, pentagram vertices 3.
inline StrategyProfile make_hoffman_singleton() {
  std::vector<std::vector<Player>> st(50);
  auto P = [](int h, int j) { return 5 * h + ((j % 5) + 5) % 5; };
  auto Q = [](int i, int j) { return 25 + 5 * i + ((j % 5) + 5) % 5; };
  for (int h = 0; h < 5; ++h)
    for (int j = 0; j < 5; ++j) {
      st[static_cast<std::size_t>(P(h, j))].push_back(P(h, j + 1));
      st[static_cast<std::size_t>(Q(h, j))].push_back(Q(h, j + 2));
    }
  for (int h = 0; h < 5; ++h)
    for (int j = 0; j < 5; ++j)
      for (int i = 0; i < 5; ++i) {
        const Player p = P(h, j), q = Q(i, h * i + j);
        if (((i - h) % 5 + 5) % 5 <= 2) st[static_cast<std::size_t>(p)].push_back(q);
        else st[static_cast<std::size_t>(q)].push_back(p);
      }
  return StrategyProfile(std::move(st));
}

/// s_0={1}, s_1={}, s_2={0}; for n >= 4 every further player buys {0,1,2}.
inline StrategyProfile make_cfip3_profile(int n = 3) {
  if (n < 3) throw InvalidParams("cfip3 profile needs n >= 3");
  std::vector<std::vector<Player>> st(static_cast<std::size_t>(n));
  st[0] = {1};
  st[2] = {0};
  for (Player i = 3; i < n; ++i) st[static_cast<std::size_t>(i)] = {0, 1, 2};
  return StrategyProfile(std::move(st));
}

/// Calls f(out_masks) for each of the 3^(n choose 2) rational profiles. Pair
/// (i,j), i<j, is one base-3 digit: 0 absent, 1 i buys j, 2 j buys i; the
/// pair (0,1) is the least significant digit. Stops when f returns false.
template <class F>
inline void for_each_rational_profile(int n, F&& f) {
  if (n < 1 || n > 6) throw InvalidParams("rational profile enumeration supports n <= 6");
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<int> digit(pairs.size(), 0);
  std::vector<detail::Mask> out(static_cast<std::size_t>(n), 0);
  while (true) {
    std::fill(out.begin(), out.end(), 0);
    for (std::size_t t = 0; t < pairs.size(); ++t) {
      const auto [i, j] = pairs[t];
      if (digit[t] == 1) out[static_cast<std::size_t>(i)] |= detail::bit(j);
      else if (digit[t] == 2) out[static_cast<std::size_t>(j)] |= detail::bit(i);
    }
    if (!f(static_cast<const std::vector<detail::Mask>&>(out))) return;
    std::size_t t = 0;
    while (t < digit.size() && digit[t] == 2) digit[t++] = 0;
    if (t == digit.size()) return;
    ++digit[t];
  }
}

/// Each ordered purchase present independently with probability p.
template <class Rng>
inline StrategyProfile random_profile(int n, double p, Rng& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<std::vector<Player>> st(static_cast<std::size_t>(n));
  for (Player i = 0; i < n; ++i)
    for (Player j = 0; j < n; ++j)
      if (i != j && coin(rng)) st[static_cast<std::size_t>(i)].push_back(j);
  return StrategyProfile(std::move(st));
}

/// Each pair is an edge with probability p, bought by a uniformly random endpoint.
template <class Rng>
inline StrategyProfile random_rational_profile(int n, double p, Rng& rng) {
  std::bernoulli_distribution coin(p), side(0.5);
  std::vector<std::vector<Player>> st(static_cast<std::size_t>(n));
  for (Player i = 0; i < n; ++i)
    for (Player j = i + 1; j < n; ++j)
      if (coin(rng)) {
        if (side(rng)) st[static_cast<std::size_t>(i)].push_back(j);
        else st[static_cast<std::size_t>(j)].push_back(i);
      }
  return StrategyProfile(std::move(st));
}

/// Random recursive tree (vertex v attaches to a uniform earlier vertex,
/// labels shuffled), each edge bought by a random endpoint.
template <class Rng>
inline StrategyProfile random_tree_profile(int n, Rng& rng) {
  std::vector<Player> label(static_cast<std::size_t>(n));
  for (Player i = 0; i < n; ++i) label[static_cast<std::size_t>(i)] = i;
  std::shuffle(label.begin(), label.end(), rng);
  std::bernoulli_distribution side(0.5);
  std::vector<std::vector<Player>> st(static_cast<std::size_t>(n));
  for (int v = 1; v < n; ++v) {
    const int u = std::uniform_int_distribution<int>(0, v - 1)(rng);
    Player a = label[static_cast<std::size_t>(u)], b = label[static_cast<std::size_t>(v)];
    if (side(rng)) std::swap(a, b);
    st[static_cast<std::size_t>(a)].push_back(b);
  }
  return StrategyProfile(std::move(st));
}

/// Random tree plus extra random edges (probability p per missing pair).
template <class Rng>
inline StrategyProfile random_connected_rational_profile(int n, double p, Rng& rng) {
  auto base = random_tree_profile(n, rng);
  auto st = base.strategies();
  std::bernoulli_distribution coin(p), side(0.5);
  for (Player i = 0; i < n; ++i)
    for (Player j = i + 1; j < n; ++j) {
      if (base.buys(i, j) || base.buys(j, i) || !coin(rng)) continue;
      if (side(rng)) st[static_cast<std::size_t>(i)].push_back(j);
      else st[static_cast<std::size_t>(j)].push_back(i);
    }
  return StrategyProfile(std::move(st));
}

}  // namespace ncg
