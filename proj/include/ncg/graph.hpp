#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "ncg/game.hpp"

namespace ncg {

class NotATree : public Error {
 public:
  using Error::Error;
};

/// G(s): edge {i,j} iff j in s_i or i in s_j.
inline UndirectedGraph build_graph(const StrategyProfile& profile) {
  UndirectedGraph g(profile.n());
  for (Player i = 0; i < profile.n(); ++i)
    for (Player j : profile.strategy(i)) g.add_edge(i, j);
  return g;
}

inline std::vector<ExtendedDistance> shortest_path_distances(const UndirectedGraph& g,
                                                             Player source) {
  if (source < 0 || source >= g.n()) throw InvalidParams("BFS source out of range");
  std::vector<ExtendedDistance> dist(static_cast<std::size_t>(g.n()), ExtendedDistance::infinite());
  std::vector<std::uint64_t> raw(static_cast<std::size_t>(g.n()), 0);
  std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
  std::deque<Player> queue{source};
  seen[static_cast<std::size_t>(source)] = 1;
  while (!queue.empty()) {
    const Player u = queue.front();
    queue.pop_front();
    dist[static_cast<std::size_t>(u)] = ExtendedDistance(raw[static_cast<std::size_t>(u)]);
    for (Player v : g.neighbors(u)) {
      if (seen[static_cast<std::size_t>(v)]) continue;
      seen[static_cast<std::size_t>(v)] = 1;
      raw[static_cast<std::size_t>(v)] = raw[static_cast<std::size_t>(u)] + 1;
      queue.push_back(v);
    }
  }
  return dist;
}

inline ExtendedDistance distance_cost(const UndirectedGraph& g, Player source) {
  ExtendedDistance total(0);
  for (const auto& d : shortest_path_distances(g, source)) total += d;
  return total;
}

inline bool is_connected(const UndirectedGraph& g) {
  if (g.n() == 0) return true;
  for (const auto& d : shortest_path_distances(g, 0))
    if (d.is_infinite()) return false;
  return true;
}

struct GraphProperties {
  ExtendedDistance diameter;
  std::size_t edge_count = 0;
  bool is_connected = false;
  bool is_tree = false;
  /// A tree of diameter 2: one center adjacent to every other vertex.
  bool is_star = false;
  bool is_cycle = false;
  bool is_complete = false;
};

inline GraphProperties graph_properties(const UndirectedGraph& g) {
  GraphProperties p;
  const int n = g.n();
  p.edge_count = g.edge_count();
  ExtendedDistance diameter(0);
  for (Player v = 0; v < n; ++v)
    for (const auto& d : shortest_path_distances(g, v)) diameter = std::max(diameter, d);
  p.diameter = diameter;
  p.is_connected = diameter.is_finite();
  p.is_tree = p.is_connected && p.edge_count + 1 == static_cast<std::size_t>(n);
  p.is_star = p.is_tree && n >= 3 && diameter == ExtendedDistance(2);
  bool all_two = p.is_connected && n >= 3;
  bool all_full = true;
  for (Player v = 0; v < n; ++v) {
    if (g.degree(v) != 2) all_two = false;
    if (g.degree(v) != n - 1) all_full = false;
  }
  p.is_cycle = all_two;
  p.is_complete = all_full;
  return p;
}

/// Vertices minimizing the largest component of T - v.
inline std::vector<Player> centroid(const UndirectedGraph& tree) {
  const int n = tree.n();
  if (n == 0 || !is_connected(tree) || tree.edge_count() + 1 != static_cast<std::size_t>(n))
    throw NotATree("centroid requires a tree");
  // Iterative DFS from 0 computing subtree sizes.
  std::vector<int> parent(static_cast<std::size_t>(n), -1), order, size(static_cast<std::size_t>(n), 1);
  std::vector<Player> stack{0};
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  seen[0] = 1;
  while (!stack.empty()) {
    const Player u = stack.back();
    stack.pop_back();
    order.push_back(u);
    for (Player v : tree.neighbors(u)) {
      if (seen[static_cast<std::size_t>(v)]) continue;
      seen[static_cast<std::size_t>(v)] = 1;
      parent[static_cast<std::size_t>(v)] = u;
      stack.push_back(v);
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if (parent[static_cast<std::size_t>(*it)] >= 0)
      size[static_cast<std::size_t>(parent[static_cast<std::size_t>(*it)])] += size[static_cast<std::size_t>(*it)];
  std::vector<int> worst(static_cast<std::size_t>(n), 0);
  for (Player v = 0; v < n; ++v) {
    int w = n - size[static_cast<std::size_t>(v)];
    for (Player c : tree.neighbors(v))
      if (parent[static_cast<std::size_t>(c)] == v) w = std::max(w, size[static_cast<std::size_t>(c)]);
    worst[static_cast<std::size_t>(v)] = w;
  }
  const int best = *std::min_element(worst.begin(), worst.end());
  std::vector<Player> out;
  for (Player v = 0; v < n; ++v)
    if (worst[static_cast<std::size_t>(v)] == best) out.push_back(v);
  return out;
}

struct ComplementForestResult {
  bool is_forest = true;
  /// When not a forest: vertices (i_0, ..., i_{k-1}) with every consecutive
  /// pair, including (i_{k-1}, i_0), non-adjacent in the input graph.
  std::vector<Player> cycle;
};

/// Checks whether the complement graph is acyclic. A triangle is preferred as
/// the reported cycle when one exists.
inline ComplementForestResult complement_is_forest(const UndirectedGraph& g) {
  const int n = g.n();
  auto non_adjacent = [&](Player u, Player v) { return u != v && !g.has_edge(u, v); };
  for (Player a = 0; a < n; ++a)
    for (Player b = a + 1; b < n; ++b) {
      if (!non_adjacent(a, b)) continue;
      for (Player c = b + 1; c < n; ++c)
        if (non_adjacent(a, c) && non_adjacent(b, c)) return {false, {a, b, c}};
    }
  // Triangle-free complement: DFS for any cycle.
  std::vector<int> parent(static_cast<std::size_t>(n), -1), depth(static_cast<std::size_t>(n), -1);
  for (Player root = 0; root < n; ++root) {
    if (depth[static_cast<std::size_t>(root)] >= 0) continue;
    depth[static_cast<std::size_t>(root)] = 0;
    std::vector<std::pair<Player, Player>> stack{{root, 0}};
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      if (next >= n) {
        stack.pop_back();
        continue;
      }
      const Player v = next++;
      if (!non_adjacent(u, v) || v == parent[static_cast<std::size_t>(u)]) continue;
      if (depth[static_cast<std::size_t>(v)] >= 0) {
        if (depth[static_cast<std::size_t>(v)] < depth[static_cast<std::size_t>(u)]) {
          std::vector<Player> cyc;
          for (Player w = u; w != v; w = parent[static_cast<std::size_t>(w)]) cyc.push_back(w);
          cyc.push_back(v);
          std::reverse(cyc.begin(), cyc.end());
          return {false, cyc};
        }
        continue;
      }
      parent[static_cast<std::size_t>(v)] = u;
      depth[static_cast<std::size_t>(v)] = depth[static_cast<std::size_t>(u)] + 1;
      stack.emplace_back(v, 0);
    }
  }
  return {true, {}};
}

/// Some triangle {a,b,c} of g, if any.
inline std::optional<std::vector<Player>> find_triangle(const UndirectedGraph& g) {
  for (Player a = 0; a < g.n(); ++a)
    for (Player b : g.neighbors(a)) {
      if (b <= a) continue;
      for (Player c : g.neighbors(b))
        if (c > b && g.has_edge(a, c)) return std::vector<Player>{a, b, c};
    }
  return std::nullopt;
}

}  // namespace ncg
