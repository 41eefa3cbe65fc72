// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Set comparisons use the naive reference code in oracle.hpp.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "ncg/ncg.hpp"
#include "oracle.hpp"

using namespace ncg;

namespace {

using Key = std::vector<std::vector<Player>>;

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += "FAILED " + what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::set<Key> enumerated(int n, const Rational& a) {
  std::set<Key> out;
  for (const auto& s : enumerate_strong_equilibria(GameParams(n, a), {true, Parallelism::hardware()}).equilibria)
    out.insert(s.strategies());
  return out;
}

std::set<Key> rational_profiles_where(int n, const std::function<bool(const oracle::Profile&)>& pred) {
  std::set<Key> out;
  for (std::uint64_t code = 0; code < oracle::pow3(n * (n - 1) / 2); ++code) {
    auto s = oracle::rational_profile(n, code);
    if (pred(s)) out.insert(std::move(s));
  }
  return out;
}

int edge_count(const oracle::Profile& s) {
  int e = 0;
  for (const auto& row : s) e += static_cast<int>(row.size());
  return e;
}

Outcome alpha_below_one() {
  Outcome o;
  for (int n : {3, 4}) {
    const auto got = enumerated(n, Rational(1, 2));
    const int pairs = n * (n - 1) / 2;
    const auto want = rational_profiles_where(n, [&](const oracle::Profile& s) { return edge_count(s) == pairs; });
    o.require(got == want, "n=" + std::to_string(n) + " set");
    o.note("n=" + std::to_string(n) + ": " + std::to_string(got.size()) + " SE of " +
           std::to_string(oracle::pow3(pairs)) + " profiles");
  }
  o.require(enumerated(3, Rational(1, 2)).size() == 8, "8 at n=3");
  return o;
}

Outcome alpha_one() {
  Outcome o;
  for (int n : {4, 5}) {
    const auto got = enumerated(n, Rational(1));
    const auto want = rational_profiles_where(n, [](const oracle::Profile& s) {
      const int d = oracle::diameter(s);
      return d >= 0 && d <= 2 && oracle::complement_is_forest(s);
    });
    o.require(got == want, "n=" + std::to_string(n) + " set");
    o.note("n=" + std::to_string(n) + ": " + std::to_string(got.size()) + " SE, predicate " + std::to_string(want.size()));
  }
  return o;
}

Outcome alpha_one_spoa() {
  Outcome o;
  const std::vector<std::pair<int, Rational>> want{{3, Rational(10, 9)}, {4, Rational(10, 9)}, {5, Rational(17, 15)}};
  for (const auto& [n, v] : want) {
    const auto r = strong_price_of_anarchy(GameParams(n, Rational(1)), {true, Parallelism::hardware()});
    o.require(r.has_equilibrium() && r.ratio == v, "n=" + std::to_string(n));
    o.note("n=" + std::to_string(n) + " " + to_string(r.ratio));
  }
  return o;
}

Outcome alpha_three_halves() {
  Outcome o;
  const Rational a(3, 2);
  const auto s3 = enumerated(3, a);
  const auto stars3 = rational_profiles_where(3, [](const oracle::Profile& s) { return oracle::diameter(s) == 2; });
  o.require(s3 == stars3 && s3.size() == 12, "n=3 equals rational 3-stars");
  const auto s4 = enumerated(4, a);
  const auto cycles4 = rational_profiles_where(4, [](const oracle::Profile& s) {
    if (edge_count(s) != 4 || oracle::diameter(s) != 2) return false;
    for (const auto& row : s)
      if (row.size() != 1) return false;
    // four edges, one purchase each, connected, no vertex of degree 3
    const auto m = oracle::adjacency(s);
    for (const auto& r : m)
      if (std::count(r.begin(), r.end(), 1) != 2) return false;
    return true;
  });
  o.require(s4 == cycles4 && s4.size() == 6, "n=4 equals the 6 directed 4-cycles");
  o.require(enumerated(5, a).empty(), "n=5 empty");
  for (int n : {3, 4}) {
    const auto r = strong_price_of_anarchy(GameParams(n, a), {true, Parallelism::hardware()});
    o.require(r.ratio == Rational(22, 21), "SPoA n=" + std::to_string(n));
    o.note("SPoA n=" + std::to_string(n) + " " + to_string(r.ratio));
  }
  o.note(std::to_string(s3.size()) + "/" + std::to_string(s4.size()) + "/0 SE");
  return o;
}

Outcome star_theorem() {
  Outcome o;
  std::uint64_t nodes = 0;
  std::size_t checked = 0;
  for (int n : {4, 5, 6})
    for (const Rational& a : {Rational(2), Rational(5, 2), Rational(10)})
      for (const auto& s : all_rational_stars(n)) {
        const auto r = is_strong_equilibrium(s, GameParams(n, a), SearchBudget::unbounded(), false, {},
                                             Parallelism::hardware());
        nodes += r.nodes_explored;
        ++checked;
        if (r.verdict != SeVerdict::Yes) o.require(false, "star n=" + std::to_string(n) + " alpha=" + to_string(a));
      }
  o.note(std::to_string(checked) + " stars, " + std::to_string(nodes) + " nodes");
  return o;
}

Outcome example1_costs() {
  Outcome o;
  for (int A : {4, 5, 6})
    for (int k : {1, 2, 3, 4}) {
      const auto s = make_example1({A, k});
      const auto lay = example1_layout({A, k});
      const auto m = oracle::adjacency(s.strategies());
      const std::int64_t n = A * k + 2;
      // per-class distance sums written out directly
      const std::int64_t root = 2 * n - A - k - 2, middle = 3 * n - A - 3 * k - 2, l2 = 3 * n - A - k - 4,
                         l1 = 4 * n - A - 3 * k - 4;
      bool ok = oracle::dist_cost(m, lay.root) == root;
      for (Player i : lay.middle) ok = ok && oracle::dist_cost(m, i) == middle;
      for (Player i : lay.l2) ok = ok && oracle::dist_cost(m, i) == l2;
      for (Player i : lay.l1) ok = ok && oracle::dist_cost(m, i) == l1;
      const auto g = build_graph(s);
      ok = ok && distance_cost(g, lay.root) == ExtendedDistance(static_cast<std::uint64_t>(root));
      o.require(ok, "A=" + std::to_string(A) + " k=" + std::to_string(k));
    }
  const auto c = example1_class_costs({4, 2});
  o.note("A=4 k=2: " + std::to_string(c.root) + "/" + std::to_string(c.middle) + "/" + std::to_string(c.l2) + "/" +
         std::to_string(c.l1));
  return o;
}

Outcome example1_resistance() {
  Outcome o;
  const auto s = make_example1({4, 2});
  const GameParams params(10, Rational(20));
  const auto r2 = find_improving_coalition(s, params, {2, kUnlimited, std::numeric_limits<std::uint64_t>::max()},
                                           false, {}, Parallelism::hardware());
  o.require(r2.status == SearchStatus::NoWitness && r2.largest_size_searched == 2, "size <= 2");
  const auto r3 = find_improving_coalition(s, params, {3, kUnlimited, 100'000'000}, false, {}, Parallelism::hardware());
  o.require(r3.status == SearchStatus::NoWitness, "size 3 within 1e8 nodes");
  o.note("size<=2 " + to_string(r2.status) + " " + std::to_string(r2.nodes_explored) + " nodes; size<=3 " +
         to_string(r3.status) + " " + std::to_string(r3.nodes_explored) + " nodes");
  return o;
}

Outcome spoa_sequence() {
  Outcome o;
  const auto r4 = example1_ratio(4), r10 = example1_ratio(10);
  o.require(r4.cost_se == Rational(1424) && r4.cost_opt == Rational(1190), "x=4 values");
  o.require(r10.cost_se == Rational(55748) && r10.cost_opt == Rational(41006), "x=10 values");
  Rational prev(0);
  for (int x = 4; x <= 20; ++x) {
    const auto r = example1_ratio(x);
    // independent BFS social cost of the tree and star optimum
    const Rational se = oracle::social_cost(make_example1({x, x}).strategies(), r.alpha);
    const std::int64_t n = x * x + 2;
    const Rational opt = r.alpha * (n - 1) + Rational(2 * (n - 1) * (n - 1));
    o.require(se == r.cost_se && opt == r.cost_opt, "x=" + std::to_string(x) + " recomputation");
    o.require(r.bounds_hold(), "x=" + std::to_string(x) + " bounds");
    o.require(r.ratio > prev, "x=" + std::to_string(x) + " increasing");
    prev = r.ratio;
  }
  o.note("x=20 ratio " + to_decimal(prev));
  return o;
}

Outcome hoffman_singleton() {
  Outcome o;
  const auto s = make_hoffman_singleton();
  const auto m = oracle::adjacency(s.strategies());
  bool srg = true;
  for (int u = 0; u < 50; ++u) {
    if (std::count(m[static_cast<std::size_t>(u)].begin(), m[static_cast<std::size_t>(u)].end(), 1) != 7) srg = false;
    for (int v = u + 1; v < 50; ++v) {
      int common = 0;
      for (int w = 0; w < 50; ++w)
        common += m[static_cast<std::size_t>(u)][static_cast<std::size_t>(w)] & m[static_cast<std::size_t>(w)][static_cast<std::size_t>(v)];
      if (common != (m[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] ? 0 : 1)) srg = false;
    }
  }
  o.require(srg, "7-regular with lambda=0, mu=1");
  bool all91 = true;
  for (int u = 0; u < 50; ++u) all91 = all91 && oracle::dist_cost(m, u) == 91;
  o.require(all91, "distance cost 91");
  const auto at5 = is_nash(s, GameParams(50, Rational(5)), true, Parallelism::hardware());
  o.require(at5.is_nash, "alpha=5 no weakly improving deviation");
  bool caps = true;
  for (Player i = 0; i < 50; ++i)
    caps = caps && at5.max_cardinality[static_cast<std::size_t>(i)] <= static_cast<int>(s.strategy(i).size()) &&
           static_cast<int>(s.strategy(i).size()) <= 4;
  o.require(caps, "cardinality caps 4/3");
  const GameParams edge(50, Rational(26, 3));
  const auto at26 = is_nash(s, edge, true, Parallelism::hardware());
  bool equal = false;
  if (!at26.is_nash && at26.witness && at26.witness->size() == 1) {
    const Player i = at26.witness->coalition[0];
    const auto before = oracle::cost(s.strategies(), edge.alpha, i);
    const auto after = oracle::cost(at26.witness->apply(s).strategies(), edge.alpha, i);
    equal = before == after && at26.witness->delta(0).value == Rational(0);
    o.note("alpha=26/3: player " + std::to_string(i + 1) + " " + to_string(before.v) + " -> " + to_string(after.v));
  }
  o.require(equal, "alpha=26/3 cost-equal deviation");
  o.note("alpha=5: " + std::to_string(at5.evaluations) + " evaluations");
  return o;
}

Outcome potentials() {
  Outcome o;
  std::mt19937_64 rng(kDefaultSeed);
  int paths = 0;
  for (int t = 0; t < 500; ++t) {
    const int n = 3 + static_cast<int>(rng() % 4);
    const GameParams params(n, Rational(1, 2));
    DynamicsOptions opt;
    opt.potentials = {PotentialKind::SingleBuyerCount};
    const auto path = run_dynamics(random_profile(n, 0.4, rng), params, Policy::best_response(), 10'000, opt);
    const auto& tr = path.potentials.at(PotentialKind::SingleBuyerCount);
    bool inc = path.termination == Termination::ReachedNash && validate_path(path, params);
    for (std::size_t k = 1; k < tr.size(); ++k) inc = inc && tr[k - 1] < tr[k];
    if (inc) ++paths;
  }
  o.require(paths == 500, "500 best-response paths");
  std::size_t moves = 0;
  bool dec = true;
  for (const Rational& a : {Rational(3, 2), Rational(2), Rational(3)}) {
    const GameParams params(3, a);
    for (unsigned code = 0; code < 64; ++code) {
      oracle::Profile raw(3);
      int bit = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          if (i != j && ((code >> bit++) & 1u)) raw[static_cast<std::size_t>(i)].push_back(j);
      const StrategyProfile s(raw);
      // weighted potential recomputed by BFS
      auto phi = [&](const oracle::Profile& p) {
        oracle::Cost c{false, Rational(0)};
        const auto adj = oracle::adjacency(p);
        for (int i = 0; i < 3; ++i) {
          const long d = oracle::dist_cost(adj, i);
          if (d == oracle::kInf) return oracle::Cost{true, {}};
          c.v += Rational(d) + 2 * a * static_cast<std::int64_t>(p[static_cast<std::size_t>(i)].size());
        }
        return c;
      };
      for (const auto& mv : enumerate_improving_moves(s, params, 3)) {
        ++moves;
        dec = dec && phi(mv.apply(s).strategies()) < phi(raw);
      }
    }
  }
  o.require(dec, "weighted potential decreases");
  o.note(std::to_string(paths) + " paths; " + std::to_string(moves) + " coalitional moves at n=3");
  return o;
}

Outcome cycles() {
  Outcome o;
  const GameParams half(3, Rational(1, 2));
  const auto start = make_cfip3_profile();
  const std::vector<Move> script{make_move(start, half, {1, 2}, {{2}, {}}), make_move(start, half, {0, 2}, {{}, {0}}),
                                 make_move(start, half, {0, 1}, {{1}, {}})};
  const auto path = run_dynamics(start, half, Policy::adversarial_replay(script), 20);
  o.require(path.termination == Termination::CycleDetected && path.period == 3 && validate_path(path, half),
            "cfip3 period 3");
  const GameParams p4(4, Rational(3, 2));
  const auto star = make_standard(Shape::Star, 4, parse_pattern("leaves-buy"));
  MoveGraph graph(p4, true, PathTarget::Strong);
  const auto cyc = find_improvement_cycle(star, graph, 1u << 16);
  bool ok = false;
  if (cyc) {
    const auto replay = run_dynamics(star, p4, Policy::scripted(*cyc), cyc->size() + 1);
    ok = replay.termination == Termination::CycleDetected && validate_path(replay, p4);
    o.note("4-star walk of " + std::to_string(cyc->size()) + " moves, period " + std::to_string(replay.period));
  }
  o.require(ok, "4-star coalitional cycle");
  return o;
}

Outcome scripts() {
  Outcome o;
  std::mt19937_64 rng(kDefaultSeed);
  int ok1 = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = 3 + static_cast<int>(rng() % 4);
    const GameParams params(n, Rational(1));
    const auto path = script_alpha1_to_strong(random_connected_rational_profile(n, 0.3, rng), params);
    if (validate_path(path, params) &&
        is_strong_equilibrium(path.final_profile(), params, SearchBudget::unbounded(), false, {},
                              Parallelism::hardware())
                .verdict == SeVerdict::Yes)
      ++ok1;
  }
  o.require(ok1 == 100, "alpha=1 script");
  int ok2 = 0;
  for (const Rational& a : {Rational(2), Rational(3), Rational(7, 2)}) {
    const GameParams params(8, a);
    for (int t = 0; t < 100; ++t) {
      const auto path = script_tree_to_star(random_tree_profile(8, rng), params);
      const auto fin = path.final_profile();
      if (validate_path(path, params) && graph_properties(build_graph(fin)).is_star && is_rational(fin)) ++ok2;
    }
  }
  o.require(ok2 == 300, "tree script");
  o.note(std::to_string(ok1) + "/100 alpha=1, " + std::to_string(ok2) + "/300 trees");
  return o;
}

Outcome weak_acyclicity_n4() {
  Outcome o;
  const GameParams params(4, Rational(3, 2));
  MoveGraph graph(params, true, PathTarget::Strong);
  int reached = 0;
  std::size_t longest = 0;
  for (std::uint64_t code = 0; code < oracle::pow3(6); ++code) {
    const StrategyProfile s(oracle::rational_profile(4, code));
    const auto path = search_improvement_path(s, graph, 1u << 20);
    if (path && validate_path(*path, params) &&
        oracle::has_improving_coalition(path->final_profile().strategies(), params.alpha) == false) {
      ++reached;
      longest = std::max(longest, path->moves.size());
    }
  }
  o.require(reached == 729, "all 729 profiles");
  o.note(std::to_string(reached) + "/729, longest shortest path " + std::to_string(longest) + ", " +
         std::to_string(graph.cached_states()) + " states");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"alpha<1 strong equilibria are the rational complete graphs (n=3,4)", alpha_below_one},
      {"alpha=1 strong equilibria: rational, diameter<=2, complement forest (n=4,5)", alpha_one},
      {"alpha=1 strong price of anarchy 10/9, 10/9, 17/15", alpha_one_spoa},
      {"alpha=3/2 strong equilibria and price of anarchy 22/21", alpha_three_halves},
      {"rational stars are strong equilibria for alpha in {2, 5/2, 10}", star_theorem},
      {"diameter-4 tree class distance costs", example1_costs},
      {"diameter-4 tree resists coalitions of size <= 3", example1_resistance},
      {"price of anarchy lower-bound sequence", spoa_sequence},
      {"Hoffman-Singleton strict Nash and its boundary", hoffman_singleton},
      {"dynamics potentials", potentials},
      {"improvement cycles", cycles},
      {"scripted convergence", scripts},
      {"coalitional paths to strong equilibrium from all n=4 profiles", weak_acyclicity_n4},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.ok) ++failures;
    std::printf("%s criterion %2zu: %s [%s] (%.2fs)\n", o.ok ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
