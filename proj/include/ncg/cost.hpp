#pragma once

#include <vector>

#include "ncg/game.hpp"
#include "ncg/graph.hpp"

namespace ncg {

inline int free_riding(const StrategyProfile& s, const UndirectedGraph& g, Player i) {
  return g.degree(i) - static_cast<int>(s.strategy(i).size());
}

inline CostBreakdown player_cost(const StrategyProfile& s, const UndirectedGraph& g,
                                 const GameParams& params, Player i) {
  CostBreakdown c;
  c.building = params.alpha * static_cast<std::int64_t>(s.strategy(i).size());
  c.distance = distance_cost(g, i);
  c.total = c.distance.is_infinite() ? Cost::infinite()
                                     : Cost(c.building + static_cast<std::int64_t>(c.distance.value()));
  c.free_riding = free_riding(s, g, i);
  return c;
}

inline CostBreakdown player_cost(const StrategyProfile& s, const GameParams& params, Player i) {
  return player_cost(s, build_graph(s), params, i);
}

inline std::vector<CostBreakdown> all_player_costs(const StrategyProfile& s, const GameParams& params) {
  const auto g = build_graph(s);
  std::vector<CostBreakdown> out;
  out.reserve(static_cast<std::size_t>(s.n()));
  for (Player i = 0; i < s.n(); ++i) out.push_back(player_cost(s, g, params, i));
  return out;
}

/// C(s) = sum of player totals.
inline Cost social_cost(const StrategyProfile& s, const GameParams& params) {
  Cost total(Rational(0));
  for (const auto& c : all_player_costs(s, params)) total += c.total;
  return total;
}

/// d(s) = sum of all distance costs.
inline ExtendedDistance total_distance(const StrategyProfile& s) {
  const auto g = build_graph(s);
  ExtendedDistance total(0);
  for (Player i = 0; i < s.n(); ++i) total += distance_cost(g, i);
  return total;
}

/// True iff no edge is bought by both endpoints.
inline bool is_rational(const StrategyProfile& s) {
  for (Player i = 0; i < s.n(); ++i)
    for (Player j : s.strategy(i))
      if (s.buys(j, i)) return false;
  return true;
}

/// Removes double purchases; the lower-indexed endpoint keeps the edge.
inline StrategyProfile normalize(const StrategyProfile& s) {
  std::vector<std::vector<Player>> st = s.strategies();
  for (Player i = 0; i < s.n(); ++i) {
    auto& mine = st[static_cast<std::size_t>(i)];
    std::erase_if(mine, [&](Player j) { return j < i && s.buys(j, i); });
  }
  return StrategyProfile(std::move(st));
}

}  // namespace ncg
