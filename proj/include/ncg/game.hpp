#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ncg/rational.hpp"

namespace ncg {

/// Players are 0-based everywhere inside the library. File formats and the
/// CLI use 1-based labels.
using Player = int;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class InvalidProfile : public Error {
 public:
  using Error::Error;
};

/// A graph distance, or the distance between two disconnected vertices.
class ExtendedDistance {
 public:
  constexpr ExtendedDistance() = default;
  constexpr explicit ExtendedDistance(std::uint64_t v) : value_(v) {}

  static constexpr ExtendedDistance infinite() {
    ExtendedDistance d;
    d.value_.reset();
    return d;
  }

  [[nodiscard]] constexpr bool is_infinite() const { return !value_.has_value(); }
  [[nodiscard]] constexpr bool is_finite() const { return value_.has_value(); }
  /// Precondition: finite.
  [[nodiscard]] constexpr std::uint64_t value() const { return *value_; }

  friend constexpr ExtendedDistance operator+(ExtendedDistance a, ExtendedDistance b) {
    if (a.is_infinite() || b.is_infinite()) return infinite();
    return ExtendedDistance(*a.value_ + *b.value_);
  }
  ExtendedDistance& operator+=(ExtendedDistance o) { return *this = *this + o; }

  friend constexpr bool operator==(const ExtendedDistance&, const ExtendedDistance&) = default;
  friend constexpr std::strong_ordering operator<=>(const ExtendedDistance& a,
                                                    const ExtendedDistance& b) {
    if (a.is_infinite() || b.is_infinite()) {
      return static_cast<int>(a.is_infinite()) <=> static_cast<int>(b.is_infinite());
    }
    return *a.value_ <=> *b.value_;
  }

  [[nodiscard]] std::string str() const {
    return is_infinite() ? std::string("inf") : std::to_string(*value_);
  }

 private:
  std::optional<std::uint64_t> value_{0};
};

/// A player or social cost: an exact rational, or infinite when the graph is
/// disconnected.
class Cost {
 public:
  Cost() = default;
  Cost(Rational v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  explicit Cost(std::int64_t v) : value_(Rational(v)) {}

  static Cost infinite() {
    Cost c;
    c.value_.reset();
    return c;
  }

  [[nodiscard]] bool is_infinite() const { return !value_.has_value(); }
  [[nodiscard]] bool is_finite() const { return value_.has_value(); }
  [[nodiscard]] const Rational& value() const { return *value_; }

  friend Cost operator+(const Cost& a, const Cost& b) {
    if (a.is_infinite() || b.is_infinite()) return infinite();
    return Cost(*a.value_ + *b.value_);
  }
  Cost& operator+=(const Cost& o) { return *this = *this + o; }

  friend bool operator==(const Cost& a, const Cost& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Cost& a, const Cost& b) {
    if (a.is_infinite() || b.is_infinite()) {
      return static_cast<int>(a.is_infinite()) <=> static_cast<int>(b.is_infinite());
    }
    if (*a.value_ < *b.value_) return std::strong_ordering::less;
    if (*b.value_ < *a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  [[nodiscard]] std::string str() const {
    return is_infinite() ? std::string("inf") : to_string(*value_);
  }

 private:
  std::optional<Rational> value_{Rational(0)};
};

inline std::ostream& operator<<(std::ostream& os, const ExtendedDistance& d) { return os << d.str(); }
inline std::ostream& operator<<(std::ostream& os, const Cost& c) { return os << c.str(); }

struct GameParams {
  int n = 3;
  Rational alpha{1};

  GameParams() = default;
  GameParams(int players, Rational edge_price) : n(players), alpha(edge_price) { validate(); }

  void validate() const {
    if (n < 3) throw InvalidParams("player count must be at least 3, got " + std::to_string(n));
    if (alpha < 0) throw InvalidParams("edge price must be non-negative, got " + to_string(alpha));
  }

  friend bool operator==(const GameParams&, const GameParams&) = default;
};

/// A strategy profile: strategies[i] is the sorted set of players i buys an
/// edge to. Doubly-bought edges are legal.
class StrategyProfile {
 public:
  StrategyProfile() = default;
  explicit StrategyProfile(int n) : strategies_(static_cast<std::size_t>(n)) {}
  explicit StrategyProfile(std::vector<std::vector<Player>> strategies)
      : strategies_(std::move(strategies)) {
    for (auto& s : strategies_) {
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    validate();
  }

  [[nodiscard]] int n() const { return static_cast<int>(strategies_.size()); }
  [[nodiscard]] const std::vector<Player>& strategy(Player i) const {
    return strategies_.at(static_cast<std::size_t>(i));
  }
  [[nodiscard]] const std::vector<std::vector<Player>>& strategies() const { return strategies_; }

  [[nodiscard]] bool buys(Player i, Player j) const {
    const auto& s = strategy(i);
    return std::binary_search(s.begin(), s.end(), j);
  }

  /// Total number of purchases, counting a doubly-bought edge twice.
  [[nodiscard]] std::size_t purchase_count() const {
    std::size_t total = 0;
    for (const auto& s : strategies_) total += s.size();
    return total;
  }

  void set_strategy(Player i, std::vector<Player> s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    check_strategy(i, s);
    strategies_.at(static_cast<std::size_t>(i)) = std::move(s);
  }

  [[nodiscard]] StrategyProfile with_strategy(Player i, std::vector<Player> s) const {
    StrategyProfile copy = *this;
    copy.set_strategy(i, std::move(s));
    return copy;
  }

  friend bool operator==(const StrategyProfile&, const StrategyProfile&) = default;
  friend auto operator<=>(const StrategyProfile&, const StrategyProfile&) = default;

 private:
  void check_strategy(Player i, const std::vector<Player>& s) const {
    for (Player j : s) {
      if (j < 0 || j >= n())
        throw InvalidProfile("player " + std::to_string(i) + " buys out-of-range index " +
                             std::to_string(j));
      if (j == i) throw InvalidProfile("player " + std::to_string(i) + " buys a self-edge");
    }
  }
  void validate() const {
    for (Player i = 0; i < n(); ++i) check_strategy(i, strategies_[static_cast<std::size_t>(i)]);
  }

  std::vector<std::vector<Player>> strategies_;
};

/// Symmetric simple graph on vertices 0..n-1 with sorted neighbor lists.
class UndirectedGraph {
 public:
  UndirectedGraph() = default;
  explicit UndirectedGraph(int n) : adjacency_(static_cast<std::size_t>(n)) {}

  [[nodiscard]] int n() const { return static_cast<int>(adjacency_.size()); }
  [[nodiscard]] const std::vector<Player>& neighbors(Player v) const {
    return adjacency_.at(static_cast<std::size_t>(v));
  }
  [[nodiscard]] int degree(Player v) const { return static_cast<int>(neighbors(v).size()); }
  [[nodiscard]] bool has_edge(Player u, Player v) const {
    const auto& nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// Adds {u,v}; duplicate insertions collapse.
  void add_edge(Player u, Player v) {
    if (u == v) throw InvalidProfile("self-loop at vertex " + std::to_string(u));
    insert(u, v);
    insert(v, u);
  }

  [[nodiscard]] std::size_t edge_count() const {
    std::size_t total = 0;
    for (const auto& nb : adjacency_) total += nb.size();
    return total / 2;
  }

  /// Edges {u,v} with u < v in lexicographic order.
  [[nodiscard]] std::vector<std::pair<Player, Player>> edges() const {
    std::vector<std::pair<Player, Player>> out;
    for (Player u = 0; u < n(); ++u)
      for (Player v : neighbors(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  friend bool operator==(const UndirectedGraph&, const UndirectedGraph&) = default;

 private:
  void insert(Player u, Player v) {
    auto& nb = adjacency_.at(static_cast<std::size_t>(u));
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v) nb.insert(it, v);
  }

  std::vector<std::vector<Player>> adjacency_;
};

struct CostBreakdown {
  Rational building{0};
  ExtendedDistance distance;
  Cost total;
  /// deg(i) - |s_i|; negative only when i and a neighbor both buy their edge.
  int free_riding = 0;

  friend bool operator==(const CostBreakdown&, const CostBreakdown&) = default;
};

}  // namespace ncg
