#pragma once

// Bitmask representation used by the exhaustive searches. Every vertex set is
// a 64-bit word, so these routines require n <= 64.

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ncg/game.hpp"

namespace ncg {

class TooLarge : public Error {
 public:
  using Error::Error;
};

namespace detail {

using Mask = std::uint64_t;

constexpr int kMaxMaskPlayers = 64;

constexpr Mask bit(int i) { return Mask{1} << i; }
constexpr Mask full_mask(int n) { return n >= 64 ? ~Mask{0} : (bit(n) - 1); }
inline int popcount(Mask m) { return std::popcount(m); }
inline int lowest(Mask m) { return std::countr_zero(m); }

template <class F>
inline void for_each_bit(Mask m, F&& f) {
  while (m) {
    f(std::countr_zero(m));
    m &= m - 1;
  }
}

inline void require_mask_size(int n, const char* what) {
  if (n > kMaxMaskPlayers)
    throw TooLarge(std::string(what) + " supports at most 64 players, got " + std::to_string(n));
}

/// Purchase masks: out[i] has bit j set iff j is in s_i.
inline std::vector<Mask> to_masks(const StrategyProfile& s) {
  require_mask_size(s.n(), "bitmask search");
  std::vector<Mask> out(static_cast<std::size_t>(s.n()), 0);
  for (Player i = 0; i < s.n(); ++i)
    for (Player j : s.strategy(i)) out[static_cast<std::size_t>(i)] |= bit(j);
  return out;
}

inline std::vector<Player> to_players(Mask m) {
  std::vector<Player> v;
  v.reserve(static_cast<std::size_t>(popcount(m)));
  for_each_bit(m, [&](int j) { v.push_back(j); });
  return v;
}

inline StrategyProfile from_masks(std::span<const Mask> out) {
  std::vector<std::vector<Player>> st;
  st.reserve(out.size());
  for (Mask m : out) st.push_back(to_players(m));
  return StrategyProfile(std::move(st));
}

inline void adjacency_into(std::span<const Mask> out, std::span<Mask> adj) {
  for (std::size_t i = 0; i < out.size(); ++i) adj[i] = out[i];
  for (std::size_t i = 0; i < out.size(); ++i)
    for_each_bit(out[i], [&](int j) { adj[static_cast<std::size_t>(j)] |= bit(static_cast<int>(i)); });
}

inline std::vector<Mask> adjacency(std::span<const Mask> out) {
  std::vector<Mask> adj(out.size(), 0);
  adjacency_into(out, adj);
  return adj;
}

/// in[i]: players that buy an edge to i.
inline std::vector<Mask> in_masks(std::span<const Mask> out) {
  std::vector<Mask> in(out.size(), 0);
  for (std::size_t i = 0; i < out.size(); ++i)
    for_each_bit(out[i], [&](int j) { in[static_cast<std::size_t>(j)] |= bit(static_cast<int>(i)); });
  return in;
}

/// Sum of BFS distances from `source`; infinite if some vertex is unreachable.
inline ExtendedDistance distance_sum(std::span<const Mask> adj, int source) {
  const Mask all = full_mask(static_cast<int>(adj.size()));
  Mask visited = bit(source);
  Mask frontier = visited;
  std::uint64_t sum = 0;
  std::uint64_t depth = 0;
  while (frontier) {
    ++depth;
    Mask next = 0;
    for_each_bit(frontier, [&](int v) { next |= adj[static_cast<std::size_t>(v)]; });
    next &= ~visited;
    sum += depth * static_cast<std::uint64_t>(popcount(next));
    visited |= next;
    frontier = next;
  }
  if (visited != all) return ExtendedDistance::infinite();
  return ExtendedDistance(sum);
}

/// Eccentricity of `source`; infinite on disconnected graphs.
inline ExtendedDistance eccentricity(std::span<const Mask> adj, int source) {
  const Mask all = full_mask(static_cast<int>(adj.size()));
  Mask visited = bit(source);
  Mask frontier = visited;
  std::uint64_t depth = 0;
  while (true) {
    Mask next = 0;
    for_each_bit(frontier, [&](int v) { next |= adj[static_cast<std::size_t>(v)]; });
    next &= ~visited;
    if (!next) break;
    ++depth;
    visited |= next;
    frontier = next;
  }
  if (visited != all) return ExtendedDistance::infinite();
  return ExtendedDistance(depth);
}

/// Exact costs scaled by the denominator q of alpha = p/q, so that
/// comparisons stay in integers: scaled = p * |s_i| + q * distance.
struct ScaledCost {
  bool infinite = false;
  std::int64_t value = 0;

  friend bool operator==(const ScaledCost&, const ScaledCost&) = default;
  friend std::strong_ordering operator<=>(const ScaledCost& a, const ScaledCost& b) {
    if (a.infinite || b.infinite)
      return static_cast<int>(a.infinite) <=> static_cast<int>(b.infinite);
    return a.value <=> b.value;
  }
};

struct ScaledPrice {
  std::int64_t p = 1;  // numerator of alpha
  std::int64_t q = 1;  // denominator of alpha

  explicit ScaledPrice(const Rational& alpha) : p(alpha.numerator()), q(alpha.denominator()) {}

  [[nodiscard]] ScaledCost cost(int bought, ExtendedDistance d) const {
    if (d.is_infinite()) return {true, 0};
    return {false, p * bought + q * static_cast<std::int64_t>(d.value())};
  }
  [[nodiscard]] Cost unscale(ScaledCost c) const {
    if (c.infinite) return Cost::infinite();
    return Cost(Rational(c.value, q));
  }
};

/// Calls f(mask) for every subset of `universe` with at most `max_size`
/// elements, ordered by size and then by increasing mask value. Stops early
/// when f returns false. Returns false iff stopped early.
template <class F>
inline bool for_each_subset_by_size(Mask universe, int max_size, F&& f) {
  int positions[64];
  int m = 0;
  for_each_bit(universe, [&](int j) { positions[m++] = j; });
  if (max_size > m) max_size = m;
  for (int size = 0; size <= max_size; ++size) {
    if (size == 0) {
      if (!f(Mask{0})) return false;
      continue;
    }
    // Gosper's hack over the compressed positions.
    std::uint64_t comb = (std::uint64_t{1} << size) - 1;
    const std::uint64_t limit = m >= 64 ? 0 : (std::uint64_t{1} << m);
    while (limit == 0 || comb < limit) {
      Mask sub = 0;
      for_each_bit(comb, [&](int p) { sub |= bit(positions[p]); });
      if (!f(sub)) return false;
      const std::uint64_t c = comb & (~comb + 1);
      const std::uint64_t r = comb + c;
      if (r == 0) break;
      comb = (((r ^ comb) >> 2) / c) | r;
    }
  }
  return true;
}

/// Calls f(mask) for every subset of `universe` with exactly `size`
/// elements, by increasing mask value. Stops early when f returns false.
template <class F>
inline bool for_each_subset_of_size(Mask universe, int size, F&& f) {
  int positions[64];
  int m = 0;
  for_each_bit(universe, [&](int j) { positions[m++] = j; });
  if (size < 0 || size > m) return true;
  if (size == 0) return f(Mask{0});
  std::uint64_t comb = (std::uint64_t{1} << size) - 1;
  const std::uint64_t limit = m >= 64 ? 0 : (std::uint64_t{1} << m);
  while (limit == 0 || comb < limit) {
    Mask sub = 0;
    for_each_bit(comb, [&](int p) { sub |= bit(positions[p]); });
    if (!f(sub)) return false;
    const std::uint64_t c = comb & (~comb + 1);
    const std::uint64_t r = comb + c;
    if (r == 0) break;
    comb = (((r ^ comb) >> 2) / c) | r;
  }
  return true;
}

}  // namespace detail
}  // namespace ncg
