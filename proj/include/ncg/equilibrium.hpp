#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncg/constructions.hpp"
#include "ncg/cost.hpp"
#include "ncg/detail/bits.hpp"
#include "ncg/game.hpp"
#include "ncg/graph.hpp"
#include "ncg/parallel.hpp"

namespace ncg {

/// Exact change c_i(s') - c_i(s). Leaving an infinite cost gives -inf.
struct CostDelta {
  bool minus_infinity = false;
  Rational value{0};

  static CostDelta between(const Cost& before, const Cost& after) {
    if (after.is_infinite()) throw std::logic_error("cost delta towards an infinite cost");
    if (before.is_infinite()) return {true, Rational(0)};
    return {false, after.value() - before.value()};
  }
  [[nodiscard]] bool negative() const { return minus_infinity || value < 0; }
  [[nodiscard]] bool non_positive() const { return minus_infinity || value <= 0; }
  [[nodiscard]] std::string str() const { return minus_infinity ? "-inf" : to_string(value); }
  friend bool operator==(const CostDelta&, const CostDelta&) = default;
};

struct DeviationWitness {
  std::vector<Player> coalition;                 // ascending
  std::vector<std::vector<Player>> replacement;  // s'_i per member
  std::vector<Cost> before;
  std::vector<Cost> after;

  [[nodiscard]] std::size_t size() const { return coalition.size(); }
  [[nodiscard]] CostDelta delta(std::size_t k) const { return CostDelta::between(before.at(k), after.at(k)); }
  [[nodiscard]] StrategyProfile apply(const StrategyProfile& s) const {
    StrategyProfile out = s;
    for (std::size_t k = 0; k < coalition.size(); ++k) out.set_strategy(coalition[k], replacement[k]);
    return out;
  }
  friend bool operator==(const DeviationWitness&, const DeviationWitness&) = default;
};

/// Recomputes every member's cost before and after the deviation and checks
/// the stored values and the improvement condition (weak: all <= 0, one < 0).
inline bool witness_is_valid(const DeviationWitness& w, const StrategyProfile& s, const GameParams& params,
                             bool weak = false) {
  if (w.coalition.empty() || w.replacement.size() != w.size() || w.before.size() != w.size() ||
      w.after.size() != w.size())
    return false;
  const auto after_profile = w.apply(s);
  const auto g0 = build_graph(s), g1 = build_graph(after_profile);
  bool any_strict = false;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const Player i = w.coalition[k];
    const Cost c0 = player_cost(s, g0, params, i).total;
    const Cost c1 = player_cost(after_profile, g1, params, i).total;
    if (c0 != w.before[k] || c1 != w.after[k]) return false;
    if (weak) {
      if (!(c1 <= c0)) return false;
      if (c1 < c0) any_strict = true;
    } else if (!(c1 < c0)) {
      return false;
    }
  }
  return !weak || any_strict;
}

inline constexpr int kUnlimited = 1 << 20;

struct SearchBudget {
  int max_coalition_size = 3;
  int max_strategy_cardinality_bonus = kUnlimited;
  std::uint64_t node_cap = 100'000'000;

  /// Coalitions of every size, full strategy spaces, no node cap.
  static SearchBudget unbounded() {
    return {kUnlimited, kUnlimited, std::numeric_limits<std::uint64_t>::max()};
  }
  void validate() const {
    if (max_coalition_size < 0 || max_strategy_cardinality_bonus < 0 || node_cap == 0)
      throw InvalidParams("search budget fields must be >= 0 and node_cap > 0");
  }
  friend bool operator==(const SearchBudget&, const SearchBudget&) = default;
};

/// Toggles for the individual prunings; all on by default. Turning them off
/// only exists for cross-checking.
struct SearchOptions {
  bool cardinality_pruning = true;  // distance-floor and degree bounds per candidate
  bool member_filter = true;        // never place players that cannot improve
  bool bound_pruning = true;        // optimistic-graph bound on partial joint strategies
  bool must_change = true;          // strict mode: every member changes strategy
  bool complement_seeding = true;   // alpha < 2: try the complement-cycle deviation first
};

enum class SearchStatus { WitnessFound, NoWitness, BudgetExhausted };

inline std::string to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::WitnessFound: return "witness-found";
    case SearchStatus::NoWitness: return "no-witness";
    case SearchStatus::BudgetExhausted: return "budget-exhausted";
  }
  return "?";
}

struct CoalitionSearchResult {
  SearchStatus status = SearchStatus::NoWitness;
  std::optional<DeviationWitness> witness;
  /// Nodes = partial joint strategies placed, in sequential search order.
  std::uint64_t nodes_explored = 0;
  /// NoWitness covers every coalition and every strategy (size and bonus
  /// limits were not binding).
  bool complete = false;
  int largest_size_searched = 0;
};

namespace detail {

/// Distance sum from `source` when the source's own neighbourhood is
/// `source_adj` (other rows may omit edges back to the source).
inline ExtendedDistance distance_sum_from(std::span<const Mask> adj, int source, Mask source_adj) {
  const int n = static_cast<int>(adj.size());
  Mask visited = bit(source);
  Mask frontier = source_adj & ~visited;
  visited |= frontier;
  std::uint64_t depth = 1;
  std::uint64_t sum = static_cast<std::uint64_t>(popcount(frontier));
  while (frontier) {
    ++depth;
    Mask next = 0;
    for_each_bit(frontier, [&](int v) { next |= adj[static_cast<std::size_t>(v)]; });
    next &= ~visited;
    sum += depth * static_cast<std::uint64_t>(popcount(next));
    visited |= next;
    frontier = next;
  }
  if (visited != full_mask(n)) return ExtendedDistance::infinite();
  return ExtendedDistance(sum);
}

inline bool accepts(ScaledCost candidate_lower_bound, ScaledCost current, bool weak) {
  // Can a strategy whose cost is at least `candidate_lower_bound` still be an
  // improvement (strict, or weak) over `current`?
  return weak ? candidate_lower_bound <= current : candidate_lower_bound < current;
}

class CoalitionEngine {
 public:
  struct Run {
    std::uint64_t nodes = 0;
    bool capped = false;
    bool found = false;
    std::vector<Mask> strategies;
    std::vector<ScaledCost> after;
  };

  CoalitionEngine(std::span<const Mask> out, const GameParams& params, const SearchBudget& budget, bool weak,
                  const SearchOptions& options)
      : n_(static_cast<int>(out.size())),
        price_(params.alpha),
        weak_(weak),
        options_(options),
        budget_(budget),
        out_(out.begin(), out.end()),
        in_(in_masks(out)),
        adj_(adjacency(out)) {
    base_.resize(out_.size());
    card_cap_.resize(out_.size());
    eligible_ = 0;
    bonus_binding_ = false;
    for (int i = 0; i < n_; ++i) {
      base_[idx(i)] = price_.cost(popcount(out_[idx(i)]), distance_sum(adj_, i));
      int cap = n_ - 1;
      if (options_.cardinality_pruning && !base_[idx(i)].infinite && price_.p > 0) {
        // q(n-1) + p m < c (strict) or <= c (weak)
        const std::int64_t slack = base_[idx(i)].value - price_.q * (n_ - 1) - (weak_ ? 0 : 1);
        cap = slack < 0 ? -1 : static_cast<int>(std::min<std::int64_t>(n_ - 1, slack / price_.p));
      }
      const int bonus_cap =
          static_cast<int>(std::min<std::int64_t>(n_ - 1, static_cast<std::int64_t>(popcount(out_[idx(i)])) +
                                                              budget_.max_strategy_cardinality_bonus));
      bool can_improve = cap >= 0;
      if (options_.cardinality_pruning && !base_[idx(i)].infinite && price_.p == 0)
        can_improve = accepts({false, price_.q * (n_ - 1)}, base_[idx(i)], weak_);
      if (!options_.member_filter) can_improve = true;
      if (can_improve) {
        eligible_ |= bit(i);
        if (bonus_cap < std::max(cap, 0)) bonus_binding_ = true;
      }
      card_cap_[idx(i)] = std::min(std::max(cap, 0), bonus_cap);
      if (!can_improve) card_cap_[idx(i)] = -1;
    }
  }

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] Mask eligible() const { return eligible_; }
  [[nodiscard]] bool bonus_binding() const { return bonus_binding_; }
  [[nodiscard]] ScaledCost base_cost(int i) const { return base_[idx(i)]; }
  [[nodiscard]] const ScaledPrice& price() const { return price_; }

  /// Searches the joint strategies of one coalition (ascending members) in
  /// lexicographic order, placing at most `limit` nodes; stops at the first
  /// improving joint strategy.
  Run run(const std::vector<int>& members, std::uint64_t limit) const {
    return run(members, limit, [](const std::vector<Mask>&, const std::vector<ScaledCost>&) { return false; });
  }

  /// Same order; visit(strategies, costs_after) is called for every
  /// improving joint strategy and returns whether to continue. The first
  /// one found is kept in the result.
  template <class Visit>
  Run run(const std::vector<int>& members, std::uint64_t limit, Visit&& visit) const {
    Run r;
    const int k = static_cast<int>(members.size());
    Mask kmask = 0;
    for (int m : members) kmask |= bit(m);
    std::vector<std::vector<Mask>> cands(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) {
      cands[idx(t)] = candidates(members[idx(t)], kmask);
      if (cands[idx(t)].empty()) return r;
    }
    // Graph without the coalition's purchases; level t holds members < t fixed.
    std::vector<Mask> out_wo = out_;
    for (int m : members) out_wo[idx(m)] = 0;
    std::vector<std::vector<Mask>> level(static_cast<std::size_t>(k + 1));
    level[0] = adjacency(out_wo);
    std::vector<Mask> chosen(static_cast<std::size_t>(k), 0);
    std::vector<Mask> opt(static_cast<std::size_t>(n_));
    std::vector<ScaledCost> after(static_cast<std::size_t>(k));
    const Mask all = full_mask(n_);

    // Iterative DFS over positions.
    std::vector<std::size_t> cursor(static_cast<std::size_t>(k), 0);
    int t = 0;
    while (t >= 0) {
      if (cursor[idx(t)] >= cands[idx(t)].size()) {
        cursor[idx(t)] = 0;
        --t;
        if (t >= 0) ++cursor[idx(t)];
        continue;
      }
      if (r.nodes >= limit) {
        r.capped = true;
        return r;
      }
      ++r.nodes;
      const int i = members[idx(t)];
      const Mask cand = cands[idx(t)][cursor[idx(t)]];
      chosen[idx(t)] = cand;
      auto& adj = level[idx(t + 1)];
      adj = level[idx(t)];
      adj[idx(i)] |= cand;
      for_each_bit(cand, [&](int j) { adj[idx(j)] |= bit(i); });

      if (t + 1 < k) {
        bool prune = false;
        if (options_.bound_pruning) {
          Mask unfixed = 0;
          for (int u = t + 1; u < k; ++u) unfixed |= bit(members[idx(u)]);
          for (int v = 0; v < n_; ++v)
            opt[idx(v)] = ((unfixed >> v) & 1u) ? (all & ~bit(v)) : ((adj[idx(v)] | unfixed) & ~bit(v));
          for (int f = t; f >= 0 && !prune; --f) {
            const int m = members[idx(f)];
            const ScaledCost lb = price_.cost(popcount(chosen[idx(f)]), distance_sum(opt, m));
            if (!accepts(lb, base_[idx(m)], weak_)) prune = true;
          }
        }
        if (prune) {
          ++cursor[idx(t)];
        } else {
          ++t;
        }
        continue;
      }

      // Full joint strategy: exact evaluation, newest member first.
      bool ok = true;
      bool any_strict = false;
      for (int f = k - 1; f >= 0; --f) {
        const int m = members[idx(f)];
        const ScaledCost c = price_.cost(popcount(chosen[idx(f)]), distance_sum(adj, m));
        after[idx(f)] = c;
        if (!accepts(c, base_[idx(m)], weak_)) {
          ok = false;
          break;
        }
        if (c < base_[idx(m)]) any_strict = true;
      }
      if (ok && (!weak_ || any_strict)) {
        if (!r.found) {
          r.found = true;
          r.strategies = chosen;
          r.after = after;
        }
        if (!visit(chosen, after)) return r;
      }
      ++cursor[idx(t)];
    }
    return r;
  }

  /// Candidate strategies of member i inside coalition `kmask`, ordered by
  /// cardinality and then mask value.
  [[nodiscard]] std::vector<Mask> candidates(int i, Mask kmask) const {
    std::vector<Mask> out;
    const int cap = card_cap_[idx(i)];
    if (cap < 0) return out;
    const ScaledCost ci = base_[idx(i)];
    const Mask universe = full_mask(n_) & ~bit(i);
    const Mask fixed_in = (in_[idx(i)] & ~kmask) | (kmask & ~bit(i));
    for_each_subset_by_size(universe, cap, [&](Mask cand) {
      if (!weak_ && options_.must_change && cand == out_[idx(i)]) return true;
      if (options_.cardinality_pruning && !ci.infinite) {
        const int deg = popcount(cand | fixed_in);
        const std::int64_t dist_lb = std::max<std::int64_t>(2 * n_ - 2 - deg, n_ - 1);
        const ScaledCost lb{false, price_.p * popcount(cand) + price_.q * dist_lb};
        if (!accepts(lb, ci, weak_)) return true;
      }
      out.push_back(cand);
      return true;
    });
    return out;
  }

 private:
  static std::size_t idx(int i) { return static_cast<std::size_t>(i); }

  int n_;
  ScaledPrice price_;
  bool weak_;
  SearchOptions options_;
  SearchBudget budget_;
  std::vector<Mask> out_, in_, adj_;
  std::vector<ScaledCost> base_;
  std::vector<int> card_cap_;
  Mask eligible_ = 0;
  bool bonus_binding_ = false;
};

inline bool next_combination(std::vector<int>& comb, int m) {
  const int k = static_cast<int>(comb.size());
  int t = k - 1;
  while (t >= 0 && comb[static_cast<std::size_t>(t)] == m - k + t) --t;
  if (t < 0) return false;
  ++comb[static_cast<std::size_t>(t)];
  for (int u = t + 1; u < k; ++u) comb[static_cast<std::size_t>(u)] = comb[static_cast<std::size_t>(u - 1)] + 1;
  return true;
}

inline DeviationWitness make_witness(const StrategyProfile& s, const GameParams& params,
                                     const std::vector<int>& members, const std::vector<Mask>& strategies) {
  DeviationWitness w;
  w.coalition = members;
  for (Mask m : strategies) w.replacement.push_back(to_players(m));
  const auto after = w.apply(s);
  const auto g0 = build_graph(s), g1 = build_graph(after);
  for (int m : members) {
    w.before.push_back(player_cost(s, g0, params, m).total);
    w.after.push_back(player_cost(after, g1, params, m).total);
  }
  return w;
}

/// The complement-cycle deviation: every cycle member buys the edge to the
/// next member.
inline std::optional<DeviationWitness> complement_cycle_witness(const StrategyProfile& s, const GameParams& params,
                                                                int max_size, bool weak) {
  const auto g = build_graph(s);
  const auto cf = complement_is_forest(g);
  if (cf.is_forest || static_cast<int>(cf.cycle.size()) > max_size) return std::nullopt;
  std::vector<std::pair<Player, Player>> order;
  const std::size_t k = cf.cycle.size();
  for (std::size_t t = 0; t < k; ++t) order.emplace_back(cf.cycle[t], cf.cycle[(t + 1) % k]);
  std::sort(order.begin(), order.end());
  DeviationWitness w;
  for (auto [i, next] : order) {
    auto st = s.strategy(i);
    st.push_back(next);
    std::sort(st.begin(), st.end());
    w.coalition.push_back(i);
    w.replacement.push_back(std::move(st));
  }
  const auto after = w.apply(s);
  const auto g1 = build_graph(after);
  for (Player i : w.coalition) {
    w.before.push_back(player_cost(s, g, params, i).total);
    w.after.push_back(player_cost(after, g1, params, i).total);
  }
  if (!witness_is_valid(w, s, params, weak)) return std::nullopt;
  return w;
}

}  // namespace detail

/// Searches for a coalition K and joint strategy s'_K improving every member
/// (strict_strong_mode: all weakly, one strictly). Coalitions by size, then
/// lexicographically; joint strategies lexicographically with each member's
/// strategies ordered by cardinality then mask. With more than one worker the
/// coalitions of one size are searched concurrently and the first witness in
/// that order is kept, so results match the sequential search.
inline CoalitionSearchResult find_improving_coalition(const StrategyProfile& s, const GameParams& params,
                                                      const SearchBudget& budget, bool strict_strong_mode = false,
                                                      const SearchOptions& options = {}, Parallelism par = {}) {
  budget.validate();
  params.validate();
  if (s.n() != params.n) throw InvalidParams("profile size does not match n");
  const bool weak = strict_strong_mode;
  const auto out = detail::to_masks(s);
  CoalitionSearchResult res;

  if (options.complement_seeding && params.alpha < 2 && budget.max_strategy_cardinality_bonus >= 1) {
    if (auto w = detail::complement_cycle_witness(s, params, budget.max_coalition_size, weak)) {
      res.status = SearchStatus::WitnessFound;
      res.witness = std::move(w);
      res.nodes_explored = 1;
      res.largest_size_searched = static_cast<int>(res.witness->size());
      return res;
    }
  }

  const detail::CoalitionEngine engine(out, params, budget, weak, options);
  const auto eligible = detail::to_players(engine.eligible());
  const int m = static_cast<int>(eligible.size());
  const int max_size = std::min(budget.max_coalition_size, m);
  const std::uint64_t cap = budget.node_cap;
  std::uint64_t nodes = 0;

  auto members_of = [&](const std::vector<int>& comb) {
    std::vector<int> mem;
    mem.reserve(comb.size());
    for (int c : comb) mem.push_back(eligible[static_cast<std::size_t>(c)]);
    return mem;
  };
  auto finish_found = [&](const std::vector<int>& mem, const detail::CoalitionEngine::Run& r) {
    res.status = SearchStatus::WitnessFound;
    res.witness = detail::make_witness(s, params, mem, r.strategies);
    res.nodes_explored = nodes;
    return res;
  };

  for (int size = 1; size <= max_size; ++size) {
    res.largest_size_searched = size;
    std::vector<int> comb(static_cast<std::size_t>(size));
    for (int t = 0; t < size; ++t) comb[static_cast<std::size_t>(t)] = t;
    if (par.threads <= 1) {
      do {
        const auto mem = members_of(comb);
        const auto r = engine.run(mem, cap - nodes);
        nodes += r.nodes;
        if (r.capped) {
          res.status = SearchStatus::BudgetExhausted;
          res.nodes_explored = cap;
          return res;
        }
        if (r.found) return finish_found(mem, r);
      } while (detail::next_combination(comb, m));
      continue;
    }
    std::vector<std::vector<int>> coalitions;
    do {
      coalitions.push_back(members_of(comb));
    } while (detail::next_combination(comb, m));
    std::vector<detail::CoalitionEngine::Run> runs(coalitions.size());
    const std::uint64_t remaining = cap - nodes;
    parallel_for(coalitions.size(), par, [&](std::size_t c) { runs[c] = engine.run(coalitions[c], remaining); });
    for (std::size_t c = 0; c < coalitions.size(); ++c) {
      const auto& r = runs[c];
      if (r.capped || r.nodes > cap - nodes) {
        res.status = SearchStatus::BudgetExhausted;
        res.nodes_explored = cap;
        return res;
      }
      nodes += r.nodes;
      if (r.found) return finish_found(coalitions[c], r);
    }
  }
  res.status = SearchStatus::NoWitness;
  res.nodes_explored = nodes;
  res.complete = max_size >= m && !engine.bonus_binding();
  return res;
}

enum class SeVerdict { Yes, No, Inconclusive };

inline std::string to_string(SeVerdict v) {
  switch (v) {
    case SeVerdict::Yes: return "yes";
    case SeVerdict::No: return "no";
    case SeVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct SeResult {
  SeVerdict verdict = SeVerdict::Inconclusive;
  std::optional<DeviationWitness> witness;
  SearchBudget budget;
  SearchStatus status = SearchStatus::NoWitness;
  std::uint64_t nodes_explored = 0;
};

/// Yes only after a complete search; budget or cap limits give Inconclusive.
inline SeResult is_strong_equilibrium(const StrategyProfile& s, const GameParams& params,
                                      const SearchBudget& budget = SearchBudget::unbounded(),
                                      bool strict_strong_mode = false, const SearchOptions& options = {},
                                      Parallelism par = {}) {
  const auto r = find_improving_coalition(s, params, budget, strict_strong_mode, options, par);
  SeResult out;
  out.budget = budget;
  out.status = r.status;
  out.nodes_explored = r.nodes_explored;
  out.witness = r.witness;
  if (r.status == SearchStatus::WitnessFound) out.verdict = SeVerdict::No;
  else if (r.status == SearchStatus::NoWitness && r.complete) out.verdict = SeVerdict::Yes;
  else out.verdict = SeVerdict::Inconclusive;
  return out;
}

struct NashResult {
  bool is_nash = true;
  std::optional<DeviationWitness> witness;
  /// Exact cost evaluations, counted up to the reported witness.
  std::uint64_t evaluations = 0;
  /// Largest strategy cardinality examined per player (-1: none).
  std::vector<int> max_cardinality;
};

namespace detail {

struct UnilateralScan {
  std::uint64_t evaluations = 0;
  int max_cardinality = -1;
  std::optional<Mask> witness;
  ScaledCost witness_cost;
};

/// Lowest candidate (cardinality, mask) with cost < c_i, or <= c_i when
/// `weak`; unchanged strategy excluded.
inline UnilateralScan scan_unilateral(std::span<const Mask> out, std::span<const Mask> in,
                                      std::span<const Mask> adj_full, const ScaledPrice& price, int i, bool weak) {
  const int n = static_cast<int>(out.size());
  UnilateralScan scan;
  const ScaledCost ci = price.cost(popcount(out[static_cast<std::size_t>(i)]), distance_sum(adj_full, i));
  std::vector<Mask> adj(adj_full.begin(), adj_full.end());
  const Mask in_i = in[static_cast<std::size_t>(i)];
  for_each_bit(out[static_cast<std::size_t>(i)] & ~in_i, [&](int j) { adj[static_cast<std::size_t>(j)] &= ~bit(i); });
  adj[static_cast<std::size_t>(i)] = in_i;
  const Mask universe = full_mask(n) & ~bit(i);
  const int base_deg = popcount(in_i);
  for (int m = 0; m <= n - 1; ++m) {
    if (!ci.infinite) {
      const std::int64_t dlb = std::max<std::int64_t>(2 * n - 2 - std::min(n - 1, base_deg + m), n - 1);
      if (!accepts({false, price.p * m + price.q * dlb}, ci, weak)) continue;
    }
    scan.max_cardinality = m;
    bool stop = false;
    for_each_subset_of_size(universe, m, [&](Mask cand) {
      if (cand == out[static_cast<std::size_t>(i)]) return true;
      if (!ci.infinite) {
        const int deg = popcount(cand | in_i);
        const std::int64_t dlb = std::max<std::int64_t>(2 * n - 2 - deg, n - 1);
        if (!accepts({false, price.p * m + price.q * dlb}, ci, weak)) return true;
      }
      ++scan.evaluations;
      const ScaledCost c = price.cost(m, distance_sum_from(adj, i, in_i | cand));
      if (accepts(c, ci, weak) && !c.infinite) {
        scan.witness = cand;
        scan.witness_cost = c;
        stop = true;
        return false;
      }
      return true;
    });
    if (stop) break;
  }
  return scan;
}

}  // namespace detail

/// Nash check by enumerating each player's strategies with the degree lower
/// bound c^d >= 2n-2-deg. strict: every alternative must be strictly worse.
inline NashResult is_nash(const StrategyProfile& s, const GameParams& params, bool strict = false,
                          Parallelism par = {}) {
  params.validate();
  if (s.n() != params.n) throw InvalidParams("profile size does not match n");
  const auto out = detail::to_masks(s);
  const auto in = detail::in_masks(out);
  const auto adj = detail::adjacency(out);
  const detail::ScaledPrice price(params.alpha);
  const int n = s.n();
  std::vector<detail::UnilateralScan> scans(static_cast<std::size_t>(n));
  NashResult res;
  res.max_cardinality.assign(static_cast<std::size_t>(n), -1);
  auto finish = [&](int upto) {
    for (int i = 0; i <= upto && i < n; ++i) {
      res.evaluations += scans[static_cast<std::size_t>(i)].evaluations;
      res.max_cardinality[static_cast<std::size_t>(i)] = scans[static_cast<std::size_t>(i)].max_cardinality;
    }
    for (int i = 0; i < n; ++i) {
      const auto& sc = scans[static_cast<std::size_t>(i)];
      if (i > upto) break;
      if (sc.witness) {
        res.is_nash = false;
        res.witness = detail::make_witness(s, params, {i}, {*sc.witness});
        break;
      }
    }
  };
  if (par.threads <= 1) {
    for (int i = 0; i < n; ++i) {
      scans[static_cast<std::size_t>(i)] = detail::scan_unilateral(out, in, adj, price, i, strict);
      if (scans[static_cast<std::size_t>(i)].witness) {
        finish(i);
        return res;
      }
    }
    finish(n - 1);
    return res;
  }
  parallel_for(static_cast<std::size_t>(n), par, [&](std::size_t i) {
    scans[i] = detail::scan_unilateral(out, in, adj, price, static_cast<int>(i), strict);
  });
  int upto = n - 1;
  for (int i = 0; i < n; ++i)
    if (scans[static_cast<std::size_t>(i)].witness) {
      upto = i;
      break;
    }
  finish(upto);
  return res;
}

/// All cost-minimizing strategies of player i, ascending by (cardinality,
/// mask). For 0 < alpha < 1 the result is checked against the closed form
/// ([n] \ {i}) minus the players already buying towards i.
inline std::vector<std::vector<Player>> best_response(const StrategyProfile& s, const GameParams& params, Player i) {
  params.validate();
  if (i < 0 || i >= s.n()) throw InvalidParams("player out of range");
  const int n = s.n();
  const auto out = detail::to_masks(s);
  const auto in = detail::in_masks(out);
  auto adj = detail::adjacency(out);
  const detail::ScaledPrice price(params.alpha);
  const detail::Mask in_i = in[static_cast<std::size_t>(i)];
  detail::for_each_bit(out[static_cast<std::size_t>(i)] & ~in_i,
                       [&](int j) { adj[static_cast<std::size_t>(j)] &= ~detail::bit(i); });
  adj[static_cast<std::size_t>(i)] = in_i;
  const detail::Mask universe = detail::full_mask(n) & ~detail::bit(i);
  const detail::Mask own = out[static_cast<std::size_t>(i)];
  detail::ScaledCost best =
      price.cost(detail::popcount(own), detail::distance_sum_from(adj, i, in_i | own));
  std::vector<detail::Mask> argmin;
  const int base_deg = detail::popcount(in_i);
  for (int m = 0; m <= n - 1; ++m) {
    if (!best.infinite) {
      const std::int64_t dlb = std::max<std::int64_t>(2 * n - 2 - std::min(n - 1, base_deg + m), n - 1);
      if (detail::ScaledCost{false, price.p * m + price.q * dlb} > best) continue;
    }
    detail::for_each_subset_of_size(universe, m, [&](detail::Mask cand) {
      if (!best.infinite) {
        const std::int64_t dlb = std::max<std::int64_t>(2 * n - 2 - detail::popcount(cand | in_i), n - 1);
        if (detail::ScaledCost{false, price.p * m + price.q * dlb} > best) return true;
      }
      const auto c = price.cost(m, detail::distance_sum_from(adj, i, in_i | cand));
      if (c < best) {
        best = c;
        argmin.clear();
      }
      if (c == best) argmin.push_back(cand);
      return true;
    });
  }
  std::sort(argmin.begin(), argmin.end(), [](detail::Mask a, detail::Mask b) {
    const int pa = detail::popcount(a), pb = detail::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  if (params.alpha > 0 && params.alpha < 1) {
    const detail::Mask closed = universe & ~in_i;
    if (argmin.size() != 1 || argmin.front() != closed)
      throw std::logic_error("best response for alpha < 1 differs from the closed form");
  }
  std::vector<std::vector<Player>> result;
  for (auto m : argmin) result.push_back(detail::to_players(m));
  return result;
}

struct Violation {
  std::string condition;       // short identifier, e.g. "contains-triangle"
  std::string detail;          // human-readable description
  std::vector<Player> vertices;  // offending vertices, when meaningful
  std::optional<DeviationWitness> witness;
};

/// Necessary conditions for a strong equilibrium that apply at this alpha.
inline std::vector<Violation> necessary_conditions(const StrategyProfile& s, const GameParams& params,
                                                   Parallelism par = {}) {
  params.validate();
  std::vector<Violation> out;
  const int n = s.n();
  const auto g = build_graph(s);
  const auto props = graph_properties(g);
  const Rational& a = params.alpha;

  if (!is_rational(s)) {
    Violation v{"not-rational", "some edge is bought by both endpoints", {}, std::nullopt};
    for (Player i = 0; i < n && v.vertices.empty(); ++i)
      for (Player j : s.strategy(i))
        if (j > i && s.buys(j, i)) {
          v.vertices = {i, j};
          break;
        }
    if (a > 0 && !v.vertices.empty()) {
      const Player drop_from = v.vertices[1], target = v.vertices[0];
      auto st = s.strategy(drop_from);
      std::erase(st, target);
      v.witness = detail::make_witness(s, params, {drop_from}, {detail::to_masks(s.with_strategy(drop_from, st))[static_cast<std::size_t>(drop_from)]});
    }
    out.push_back(std::move(v));
  }

  if (a == Rational(1) && props.diameter > ExtendedDistance(2)) {
    // A pair at distance >= 3: one endpoint buying the edge gains at least 2.
    std::optional<DeviationWitness> w;
    std::vector<Player> pair;
    for (Player i = 0; i < n && !w; ++i) {
      const auto d = shortest_path_distances(g, i);
      for (Player j = 0; j < n; ++j)
        if (d[static_cast<std::size_t>(j)] > ExtendedDistance(2)) {
          auto st = s.strategy(i);
          st.push_back(j);
          std::sort(st.begin(), st.end());
          const auto cand = detail::make_witness(s, params, {i}, {detail::to_masks(s.with_strategy(i, st))[static_cast<std::size_t>(i)]});
          if (witness_is_valid(cand, s, params)) {
            w = cand;
            pair = {i, j};
          }
          break;
        }
    }
    out.push_back({"diameter-exceeds-2", "graph diameter is " + props.diameter.str(), pair, std::nullopt});
    if (w) out.push_back({"not-nash", "buying an edge across a distance >= 3 pair improves", pair, w});
    else {
      const auto nash = is_nash(s, params, false, par);
      if (!nash.is_nash) out.push_back({"not-nash", "a unilateral deviation improves", {}, nash.witness});
    }
  } else if (n <= detail::kMaxMaskPlayers) {
    const auto nash = is_nash(s, params, false, par);
    if (!nash.is_nash)
      out.push_back({"not-nash", "a unilateral deviation improves", nash.witness->coalition, nash.witness});
  }

  if (a < 2) {
    const auto cf = complement_is_forest(g);
    if (!cf.is_forest) {
      Violation v{"complement-not-forest", "the complement graph contains a cycle", cf.cycle, std::nullopt};
      v.witness = detail::complement_cycle_witness(s, params, n, false);
      out.push_back(std::move(v));
    }
  }
  if (a > 1 && a < 2 && n >= 5) {
    if (auto tri = find_triangle(g))
      out.push_back({"contains-triangle", "the graph contains K3", *tri, std::nullopt});
  }
  return out;
}

enum class OracleVerdict { StrongEquilibrium, NotStrongEquilibrium, Unknown };

inline std::string to_string(OracleVerdict v) {
  switch (v) {
    case OracleVerdict::StrongEquilibrium: return "strong-equilibrium";
    case OracleVerdict::NotStrongEquilibrium: return "not-strong-equilibrium";
    case OracleVerdict::Unknown: return "unknown";
  }
  return "?";
}

struct OraclePrediction {
  OracleVerdict verdict = OracleVerdict::Unknown;
  std::string reason;
};

/// Prediction from the known characterizations, without any search.
inline OraclePrediction theory_oracle(const StrategyProfile& s, const GameParams& params) {
  params.validate();
  using V = OracleVerdict;
  const Rational& a = params.alpha;
  const int n = s.n();
  auto yes_no = [](bool b, std::string reason) {
    return OraclePrediction{b ? V::StrongEquilibrium : V::NotStrongEquilibrium, std::move(reason)};
  };
  if (a == Rational(0)) return {V::Unknown, "alpha=0: free edges, outside the characterized range"};
  const bool rational = is_rational(s);
  const auto props = graph_properties(build_graph(s));
  if (a < 1) return yes_no(rational && props.is_complete, "alpha<1: rational complete graph");
  if (a == Rational(1)) {
    const bool forest = complement_is_forest(build_graph(s)).is_forest;
    return yes_no(rational && props.diameter <= ExtendedDistance(2) && forest,
                  "alpha=1: rational, diameter<=2, complement forest");
  }
  if (a < 2) {
    if (n == 3) return yes_no(rational && props.is_star, "1<alpha<2, n=3: rational 3-star");
    if (n == 4) {
      bool ones = true;
      for (Player i = 0; i < n; ++i)
        if (s.strategy(i).size() != 1) ones = false;
      return yes_no(rational && props.is_cycle && ones, "1<alpha<2, n=4: cycle with one purchase each");
    }
    return {V::NotStrongEquilibrium, "1<alpha<2, n>=5: no strong equilibrium exists"};
  }
  if (!rational) return {V::NotStrongEquilibrium, "strong equilibria are rational"};
  if (!props.is_connected) return {V::NotStrongEquilibrium, "disconnected profile"};
  if (props.is_star) return {V::StrongEquilibrium, "alpha>=2: rational star"};
  if (auto ex = match_example1(s); ex && a >= Rational(2 * n))
    return {V::StrongEquilibrium, "alpha>=2n: diameter-4 tree family"};
  return {V::Unknown, "alpha>=2: outside the characterized families"};
}

}  // namespace ncg
