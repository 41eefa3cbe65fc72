#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "ncg/canonical.hpp"
#include "ncg/cost.hpp"
#include "ncg/equilibrium.hpp"
#include "ncg/graph.hpp"

namespace ncg {

/// A step of an improvement path; every mover strictly improves.
using Move = DeviationWitness;

class ScriptAssertion : public Error {
 public:
  using Error::Error;
};

class WrongAlpha : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class StateCapHit : public Error {
 public:
  using Error::Error;
};

enum class PotentialKind { SingleBuyerCount, WeightedN3 };

inline std::string to_string(PotentialKind k) {
  return k == PotentialKind::SingleBuyerCount ? "single_buyer_count" : "weighted_n3";
}

/// single_buyer_count: edges bought by exactly one endpoint.
/// weighted_n3: sum of c_i^d + 2 c_i^b, infinite on disconnected profiles.
inline Cost potential_value(const StrategyProfile& s, const GameParams& params, PotentialKind kind) {
  if (kind == PotentialKind::SingleBuyerCount) {
    std::int64_t count = 0;
    for (Player i = 0; i < s.n(); ++i)
      for (Player j : s.strategy(i))
        if (!s.buys(j, i)) ++count;
    return Cost(Rational(count));
  }
  const auto g = build_graph(s);
  Cost total(Rational(0));
  for (Player i = 0; i < s.n(); ++i) {
    const auto d = distance_cost(g, i);
    if (d.is_infinite()) return Cost::infinite();
    total += Cost(Rational(static_cast<std::int64_t>(d.value())) +
                  2 * params.alpha * static_cast<std::int64_t>(s.strategy(i).size()));
  }
  return total;
}

enum class Termination { ReachedNash, ReachedStrong, CycleDetected, StepCapHit, SearchBudgetExhausted };

inline std::string to_string(Termination t) {
  switch (t) {
    case Termination::ReachedNash: return "reached-nash";
    case Termination::ReachedStrong: return "reached-strong";
    case Termination::CycleDetected: return "cycle-detected";
    case Termination::StepCapHit: return "step-cap-hit";
    case Termination::SearchBudgetExhausted: return "search-budget-exhausted";
  }
  return "?";
}

struct PathRecord {
  StrategyProfile start;
  std::vector<Move> moves;
  Termination termination = Termination::StepCapHit;
  /// CycleDetected: state `first_revisit_index` reappeared after `period` moves.
  std::size_t period = 0;
  std::size_t first_revisit_index = 0;
  /// One value per visited state (start included), per registered potential.
  std::map<PotentialKind, std::vector<Cost>> potentials;

  [[nodiscard]] StrategyProfile state(std::size_t k) const {
    StrategyProfile s = start;
    for (std::size_t t = 0; t < k; ++t) s = moves.at(t).apply(s);
    return s;
  }
  [[nodiscard]] StrategyProfile final_profile() const { return state(moves.size()); }
};

/// Replays the path from its start, recomputing every delta exactly.
inline bool validate_path(const PathRecord& path, const GameParams& params) {
  StrategyProfile s = path.start;
  for (const auto& m : path.moves) {
    if (!witness_is_valid(m, s, params)) return false;
    s = m.apply(s);
  }
  return true;
}

struct Policy {
  enum class Kind { BestResponse, FirstImprovement, Coalitional, Scripted, AdversarialReplay };
  Kind kind = Kind::BestResponse;
  int coalition_cap = 1;
  /// Scripted: applied once in order. AdversarialReplay: (movers,
  /// replacement) pairs applied cyclically; costs are recomputed.
  std::vector<Move> script;

  static Policy best_response() { return {Kind::BestResponse, 1, {}}; }
  static Policy first_improvement() { return {Kind::FirstImprovement, 1, {}}; }
  static Policy coalitional(int cap) { return {Kind::Coalitional, cap, {}}; }
  static Policy scripted(std::vector<Move> moves) { return {Kind::Scripted, 1, std::move(moves)}; }
  static Policy adversarial_replay(std::vector<Move> moves) {
    return {Kind::AdversarialReplay, 1, std::move(moves)};
  }
};

struct DynamicsOptions {
  bool detect_iso = false;
  std::vector<PotentialKind> potentials;
  /// Budget of each coalition search under the coalitional policy; the size
  /// limit comes from the policy.
  SearchBudget search_budget = SearchBudget::unbounded();
  Parallelism parallelism{};
};

/// Builds the move of `movers` switching to `replacement`, with costs
/// evaluated on `s`.
inline Move make_move(const StrategyProfile& s, const GameParams& params, std::vector<Player> movers,
                      std::vector<std::vector<Player>> replacement) {
  Move m;
  std::vector<std::pair<Player, std::vector<Player>>> pairs;
  for (std::size_t k = 0; k < movers.size(); ++k) {
    auto r = replacement.at(k);
    std::sort(r.begin(), r.end());
    pairs.emplace_back(movers[k], std::move(r));
  }
  std::sort(pairs.begin(), pairs.end());
  for (auto& [p, r] : pairs) {
    m.coalition.push_back(p);
    m.replacement.push_back(std::move(r));
  }
  const auto after = m.apply(s);
  const auto g0 = build_graph(s), g1 = build_graph(after);
  for (Player p : m.coalition) {
    m.before.push_back(player_cost(s, g0, params, p).total);
    m.after.push_back(player_cost(after, g1, params, p).total);
  }
  return m;
}

/// Every strictly improving move with at most `cap` movers: by size, by
/// coalition, then by joint strategy, all lexicographic. Moves in which a
/// mover keeps its strategy coincide with smaller moves and are omitted.
inline std::vector<Move> enumerate_improving_moves(const StrategyProfile& s, const GameParams& params, int cap) {
  params.validate();
  const auto out = detail::to_masks(s);
  const SearchBudget budget{cap, kUnlimited, std::numeric_limits<std::uint64_t>::max()};
  const detail::CoalitionEngine engine(out, params, budget, false, SearchOptions{});
  const auto eligible = detail::to_players(engine.eligible());
  const int m = static_cast<int>(eligible.size());
  std::vector<Move> moves;
  for (int size = 1; size <= std::min(cap, m); ++size) {
    std::vector<int> comb(static_cast<std::size_t>(size));
    for (int t = 0; t < size; ++t) comb[static_cast<std::size_t>(t)] = t;
    do {
      std::vector<int> mem;
      for (int c : comb) mem.push_back(eligible[static_cast<std::size_t>(c)]);
      engine.run(mem, std::numeric_limits<std::uint64_t>::max(),
                 [&](const std::vector<detail::Mask>& st, const std::vector<detail::ScaledCost>&) {
                   moves.push_back(detail::make_witness(s, params, mem, st));
                   return true;
                 });
    } while (detail::next_combination(comb, m));
  }
  return moves;
}

namespace detail {

inline CanonicalForm state_key(const StrategyProfile& s, bool iso) {
  return iso ? canonical_form(s) : exact_form(s);
}

}  // namespace detail

/// Applies policy moves until none improves, a state repeats, or max_steps
/// moves were made.
inline PathRecord run_dynamics(const StrategyProfile& start, const GameParams& params, const Policy& policy,
                               std::size_t max_steps, const DynamicsOptions& options = {}) {
  params.validate();
  if (max_steps == 0) throw InvalidParams("max_steps must be positive");
  PathRecord rec;
  rec.start = start;
  StrategyProfile s = start;
  std::unordered_map<CanonicalForm, std::size_t, CanonicalFormHash> seen;
  auto record_state = [&](const StrategyProfile& st) {
    for (auto k : options.potentials) rec.potentials[k].push_back(potential_value(st, params, k));
  };
  record_state(s);
  seen.emplace(detail::state_key(s, options.detect_iso), 0);
  const int n = s.n();
  Player next_player = 0;

  for (std::size_t step = 0; step < max_steps; ++step) {
    std::optional<Move> move;
    switch (policy.kind) {
      case Policy::Kind::BestResponse: {
        for (int t = 0; t < n && !move; ++t) {
          const Player i = (next_player + t) % n;
          const auto brs = best_response(s, params, i);
          if (std::find(brs.begin(), brs.end(), s.strategy(i)) != brs.end()) continue;
          move = make_move(s, params, {i}, {brs.front()});
          next_player = (i + 1) % n;
        }
        if (!move) {
          rec.termination = Termination::ReachedNash;
          return rec;
        }
        break;
      }
      case Policy::Kind::FirstImprovement: {
        const auto nash = is_nash(s, params, false);
        if (nash.is_nash) {
          rec.termination = Termination::ReachedNash;
          return rec;
        }
        move = *nash.witness;
        break;
      }
      case Policy::Kind::Coalitional: {
        auto budget = options.search_budget;
        budget.max_coalition_size = policy.coalition_cap;
        const auto r = find_improving_coalition(s, params, budget, false, SearchOptions{}, options.parallelism);
        if (r.status == SearchStatus::BudgetExhausted) {
          rec.termination = Termination::SearchBudgetExhausted;
          return rec;
        }
        if (r.status == SearchStatus::NoWitness) {
          rec.termination = policy.coalition_cap >= n ? Termination::ReachedStrong : Termination::ReachedNash;
          return rec;
        }
        move = *r.witness;
        break;
      }
      case Policy::Kind::Scripted:
      case Policy::Kind::AdversarialReplay: {
        if (policy.script.empty()) throw InvalidParams("scripted policy without moves");
        if (policy.kind == Policy::Kind::Scripted && step >= policy.script.size()) {
          rec.termination = is_nash(s, params).is_nash ? Termination::ReachedNash : Termination::StepCapHit;
          return rec;
        }
        const auto& sm = policy.script[step % policy.script.size()];
        move = make_move(s, params, sm.coalition, sm.replacement);
        if (!witness_is_valid(*move, s, params))
          throw ScriptAssertion("scripted move " + std::to_string(step) + " does not improve every mover");
        break;
      }
    }
    s = move->apply(s);
    rec.moves.push_back(std::move(*move));
    record_state(s);
    const auto key = detail::state_key(s, options.detect_iso);
    if (auto it = seen.find(key); it != seen.end()) {
      rec.termination = Termination::CycleDetected;
      rec.first_revisit_index = it->second;
      rec.period = rec.moves.size() - it->second;
      return rec;
    }
    seen.emplace(key, rec.moves.size());
  }
  rec.termination = Termination::StepCapHit;
  return rec;
}

namespace detail {

inline void apply_asserted(PathRecord& rec, StrategyProfile& s, const GameParams& params, Move m,
                           const char* phase) {
  if (!witness_is_valid(m, s, params))
    throw ScriptAssertion(std::string(phase) + ": step " + std::to_string(rec.moves.size()) +
                          " does not strictly improve every mover");
  s = m.apply(s);
  rec.moves.push_back(std::move(m));
}

}  // namespace detail

/// alpha = 1: connect, shortcut every distance >= 3 pair, strip double
/// purchases, then let complement cycles each buy their next edge.
inline PathRecord script_alpha1_to_strong(const StrategyProfile& start, const GameParams& params) {
  params.validate();
  if (params.alpha != Rational(1)) throw WrongAlpha("script_alpha1_to_strong requires alpha = 1");
  PathRecord rec;
  rec.start = start;
  StrategyProfile s = start;
  const int n = s.n();

  // Connect: player 0 buys one edge into every other component.
  {
    const auto d = shortest_path_distances(build_graph(s), 0);
    std::vector<Player> targets;
    std::vector<char> covered(static_cast<std::size_t>(n), 0);
    const auto g = build_graph(s);
    for (Player v = 0; v < n; ++v) {
      if (d[static_cast<std::size_t>(v)].is_finite() || covered[static_cast<std::size_t>(v)]) continue;
      targets.push_back(v);
      for (Player u = 0; u < n; ++u)
        if (shortest_path_distances(g, v)[static_cast<std::size_t>(u)].is_finite())
          covered[static_cast<std::size_t>(u)] = 1;
    }
    if (!targets.empty()) {
      auto st = s.strategy(0);
      st.insert(st.end(), targets.begin(), targets.end());
      detail::apply_asserted(rec, s, params, make_move(s, params, {0}, {st}), "connect");
    }
  }
  // Shortcut pairs at distance >= 3.
  while (true) {
    const auto g = build_graph(s);
    std::optional<std::pair<Player, Player>> far;
    for (Player i = 0; i < n && !far; ++i) {
      const auto d = shortest_path_distances(g, i);
      for (Player j = 0; j < n; ++j)
        if (d[static_cast<std::size_t>(j)] > ExtendedDistance(2)) {
          far = {i, j};
          break;
        }
    }
    if (!far) break;
    auto st = s.strategy(far->first);
    st.push_back(far->second);
    detail::apply_asserted(rec, s, params, make_move(s, params, {far->first}, {st}), "shortcut");
  }
  // Strip double purchases; the higher-indexed endpoint drops.
  for (Player i = 0; i < n; ++i)
    for (Player j = i + 1; j < n; ++j)
      if (s.buys(i, j) && s.buys(j, i)) {
        auto st = s.strategy(j);
        std::erase(st, i);
        detail::apply_asserted(rec, s, params, make_move(s, params, {j}, {st}), "strip");
      }
  // Complement cycles.
  while (true) {
    const auto cf = complement_is_forest(build_graph(s));
    if (cf.is_forest) break;
    std::vector<Player> movers;
    std::vector<std::vector<Player>> repl;
    for (std::size_t t = 0; t < cf.cycle.size(); ++t) {
      const Player i = cf.cycle[t], nxt = cf.cycle[(t + 1) % cf.cycle.size()];
      auto st = s.strategy(i);
      st.push_back(nxt);
      movers.push_back(i);
      repl.push_back(std::move(st));
    }
    detail::apply_asserted(rec, s, params, make_move(s, params, movers, repl), "complement cycle");
  }
  rec.termination = Termination::ReachedStrong;
  return rec;
}

/// Trees with alpha in [2, n/2): every player at distance >= 2 from the
/// lowest centroid vertex v buys an edge to v, purchased edges not touching
/// v are dropped, then double purchases are stripped. Ends in a star at v.
inline PathRecord script_tree_to_star(const StrategyProfile& start, const GameParams& params) {
  params.validate();
  const int n = start.n();
  const auto g0 = build_graph(start);
  if (!is_connected(g0) || g0.edge_count() + 1 != static_cast<std::size_t>(n))
    throw PreconditionViolated("script_tree_to_star requires a tree");
  if (params.alpha < 2 || !(params.alpha < Rational(n, 2)))
    throw PreconditionViolated("script_tree_to_star requires 2 <= alpha < n/2");
  PathRecord rec;
  rec.start = start;
  StrategyProfile s = start;
  const Player v = centroid(g0).front();

  for (Player i = 0; i < n; ++i) {
    if (i == v) continue;
    const auto d = shortest_path_distances(build_graph(s), v);
    if (d[static_cast<std::size_t>(i)] < ExtendedDistance(2)) continue;
    auto st = s.strategy(i);
    st.push_back(v);
    detail::apply_asserted(rec, s, params, make_move(s, params, {i}, {st}), "buy towards centroid");
  }
  for (Player i = 0; i < n; ++i) {
    if (i == v) continue;
    auto st = s.strategy(i);
    const auto before = st.size();
    std::erase_if(st, [&](Player j) { return j != v; });
    if (st.size() != before)
      detail::apply_asserted(rec, s, params, make_move(s, params, {i}, {st}), "drop non-centroid edge");
  }
  for (Player i = 0; i < n; ++i)
    if (i != v && s.buys(i, v) && s.buys(v, i))
      detail::apply_asserted(rec, s, params, make_move(s, params, {i}, {{}}), "strip");
  if (!graph_properties(build_graph(s)).is_star || !is_rational(s))
    throw ScriptAssertion("tree-to-star script did not end in a rational star");
  rec.termination = Termination::ReachedStrong;
  return rec;
}

enum class PathTarget { Nash, Strong };

/// Memoized improving moves and target status per exact state, for
/// profile-space searches on small n.
class MoveGraph {
 public:
  MoveGraph(GameParams params, bool coalitional, PathTarget target)
      : params_(params), coalitional_(coalitional), target_(target) {
    params_.validate();
  }

  const std::vector<Move>& moves(const StrategyProfile& s) {
    auto key = exact_form(s);
    auto it = moves_.find(key);
    if (it != moves_.end()) return it->second;
    auto mv = enumerate_improving_moves(s, params_, coalitional_ ? s.n() : 1);
    return moves_.emplace(std::move(key), std::move(mv)).first->second;
  }

  bool is_target(const StrategyProfile& s) {
    auto key = exact_form(s);
    if (auto it = target_cache_.find(key); it != target_cache_.end()) return it->second;
    bool ok = false;
    if (target_ == PathTarget::Nash) ok = is_nash(s, params_).is_nash;
    else ok = is_strong_equilibrium(s, params_).verdict == SeVerdict::Yes;
    target_cache_.emplace(std::move(key), ok);
    return ok;
  }

  [[nodiscard]] const GameParams& params() const { return params_; }
  [[nodiscard]] std::size_t cached_states() const { return moves_.size(); }

 private:
  GameParams params_;
  bool coalitional_;
  PathTarget target_;
  std::unordered_map<CanonicalForm, std::vector<Move>, CanonicalFormHash> moves_;
  std::unordered_map<CanonicalForm, bool, CanonicalFormHash> target_cache_;
};

/// Breadth-first search along improving moves for a shortest path to a
/// target state; among shortest paths the lexicographically least by move
/// order. Throws StateCapHit when more than state_cap states are discovered.
inline std::optional<PathRecord> search_improvement_path(const StrategyProfile& start, MoveGraph& graph,
                                                         std::size_t state_cap) {
  struct Node {
    StrategyProfile state;
    std::size_t parent;
    std::size_t move_index;
  };
  std::vector<Node> nodes{{start, 0, 0}};
  std::unordered_map<CanonicalForm, std::size_t, CanonicalFormHash> index{{exact_form(start), 0}};
  auto build = [&](std::size_t k) {
    std::vector<Move> rev;
    while (k != 0) {
      const auto& nd = nodes[k];
      rev.push_back(graph.moves(nodes[nd.parent].state)[nd.move_index]);
      k = nd.parent;
    }
    PathRecord rec;
    rec.start = start;
    rec.moves.assign(rev.rbegin(), rev.rend());
    rec.termination = Termination::ReachedStrong;
    return rec;
  };
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    const StrategyProfile cur = nodes[head].state;
    if (graph.is_target(cur)) return build(head);
    const auto& mv = graph.moves(cur);
    for (std::size_t m = 0; m < mv.size(); ++m) {
      auto nxt = mv[m].apply(cur);
      auto key = exact_form(nxt);
      if (index.contains(key)) continue;
      if (nodes.size() >= state_cap) throw StateCapHit("improvement path search exceeded the state cap");
      index.emplace(std::move(key), nodes.size());
      nodes.push_back({std::move(nxt), head, m});
    }
  }
  return std::nullopt;
}

inline std::optional<PathRecord> search_improvement_path(const StrategyProfile& start, const GameParams& params,
                                                         PathTarget target, bool coalitional, std::size_t state_cap) {
  MoveGraph graph(params, coalitional, target);
  auto rec = search_improvement_path(start, graph, state_cap);
  if (rec && target == PathTarget::Nash) rec->termination = Termination::ReachedNash;
  return rec;
}

/// Depth-first search over states reachable from `start` for a closed walk
/// of improving moves. Returns the moves from start through the cycle back
/// to the first repeated state.
inline std::optional<std::vector<Move>> find_improvement_cycle(const StrategyProfile& start, MoveGraph& graph,
                                                               std::size_t state_cap) {
  enum : char { White = 0, Grey = 1, Black = 2 };
  std::unordered_map<CanonicalForm, char, CanonicalFormHash> colour;
  struct Frame {
    StrategyProfile state;
    std::size_t next_move;
  };
  std::vector<Frame> stack{{start, 0}};
  std::vector<Move> path;
  colour[exact_form(start)] = Grey;
  while (!stack.empty()) {
    auto& fr = stack.back();
    const auto& mv = graph.moves(fr.state);
    if (fr.next_move >= mv.size()) {
      colour[exact_form(fr.state)] = Black;
      stack.pop_back();
      if (!path.empty()) path.pop_back();
      continue;
    }
    const Move m = mv[fr.next_move++];
    auto nxt = m.apply(fr.state);
    auto key = exact_form(nxt);
    const char c = colour.contains(key) ? colour[key] : White;
    if (c == Grey) {
      path.push_back(m);
      return path;
    }
    if (c == Black) continue;
    if (colour.size() >= state_cap) throw StateCapHit("cycle search exceeded the state cap");
    colour[key] = Grey;
    path.push_back(m);
    stack.push_back({std::move(nxt), 0});
  }
  return std::nullopt;
}

struct CostTableSearchResult {
  StrategyProfile best;
  /// Target cost values not realized by any player of `best`.
  std::size_t missing = 0;
  bool exact = false;
};

/// Random local search for a rational profile whose set of distinct player
/// costs equals `table`. A hunting aid only: failure proves nothing.
inline CostTableSearchResult search_cost_table_profile(int n, const Rational& alpha,
                                                       const std::vector<Rational>& table, std::uint64_t seed,
                                                       std::size_t iterations) {
  const GameParams params(n, alpha);
  std::mt19937_64 rng(seed);
  std::vector<Rational> target = table;
  std::sort(target.begin(), target.end());
  target.erase(std::unique(target.begin(), target.end()), target.end());
  auto score = [&](const StrategyProfile& s) -> std::size_t {
    std::vector<Rational> have;
    for (const auto& c : all_player_costs(s, params)) {
      if (c.total.is_infinite()) return target.size() + static_cast<std::size_t>(n);
      have.push_back(c.total.value());
    }
    std::sort(have.begin(), have.end());
    have.erase(std::unique(have.begin(), have.end()), have.end());
    std::size_t miss = 0;
    for (const auto& t : target)
      if (!std::binary_search(have.begin(), have.end(), t)) ++miss;
    for (const auto& h : have)
      if (!std::binary_search(target.begin(), target.end(), h)) ++miss;
    return miss;
  };
  StrategyProfile cur = make_standard(Shape::Cycle, n, parse_pattern("each-buys-next"));
  std::size_t cur_score = score(cur);
  CostTableSearchResult best{cur, cur_score, cur_score == 0};
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (std::size_t it = 0; it < iterations && !best.exact; ++it) {
    const Player i = pick(rng);
    Player j = pick(rng);
    if (j == i) continue;
    auto st = cur.strategy(i);
    if (cur.buys(i, j)) std::erase(st, j);
    else if (!cur.buys(j, i)) st.push_back(j);
    else continue;
    auto cand = cur.with_strategy(i, st);
    const auto sc = score(cand);
    if (sc <= cur_score || std::uniform_int_distribution<int>(0, 19)(rng) == 0) {
      cur = std::move(cand);
      cur_score = sc;
      if (sc < best.missing) best = {cur, sc, sc == 0};
    }
  }
  return best;
}

}  // namespace ncg
