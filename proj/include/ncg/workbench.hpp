#pragma once

// Reproduction recipes: each runs one experiment bundle and reports every
// check with its exact values.

#include <chrono>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ncg/canonical.hpp"
#include "ncg/constructions.hpp"
#include "ncg/dynamics.hpp"
#include "ncg/equilibrium.hpp"
#include "ncg/io.hpp"
#include "ncg/metrics.hpp"

namespace ncg {

class RecipeFailed : public Error {
 public:
  using Error::Error;
};

inline constexpr std::uint64_t kDefaultSeed = 20240131;

struct RecipeOptions {
  Parallelism parallelism{};
  std::uint64_t seed = kDefaultSeed;
};

struct Check {
  std::string name;
  bool passed = false;
  Json value;
};

struct ReproReport {
  std::string recipe;
  std::vector<Check> checks;

  [[nodiscard]] bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }
  [[nodiscard]] const Check* first_failure() const {
    for (const auto& c : checks)
      if (!c.passed) return &c;
    return nullptr;
  }
  void add(std::string name, bool ok, Json value = nullptr) { checks.push_back({std::move(name), ok, std::move(value)}); }

  [[nodiscard]] Json to_json() const {
    Json cs = Json::array();
    for (const auto& c : checks) cs.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"value", c.value}});
    return Json{{"recipe", recipe}, {"passed", passed()}, {"checks", cs}};
  }
  /// Throws RecipeFailed naming the first failing check.
  void require() const {
    if (const auto* f = first_failure()) throw RecipeFailed(recipe + ": check '" + f->name + "' failed");
  }
};

/// Metadata of one CLI run. Payloads exclude the wall time so that
/// identical inputs give identical bytes.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::map<std::string, std::string> input_hashes;
  std::vector<std::string> output_paths;
  double wall_time_seconds = 0;
  unsigned workers = 1;

  [[nodiscard]] Json to_json() const {
    return Json{{"command", command},     {"parameters", parameters},           {"input_hashes", input_hashes},
                {"output_paths", output_paths}, {"wall_time_seconds", wall_time_seconds}, {"workers", workers}};
  }
};

/// FNV-1a, 64 bit, as hex.
inline std::string content_hash(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

inline ReproReport recipe_alpha1_spoa(const RecipeOptions& opt) {
  ReproReport rep{"alpha1-spoa", {}};
  const std::map<int, Rational> expected{{3, Rational(10, 9)}, {4, Rational(10, 9)}, {5, Rational(17, 15)}};
  for (const auto& [n, want] : expected) {
    const auto r = strong_price_of_anarchy(GameParams(n, Rational(1)), {true, opt.parallelism});
    rep.add("spoa n=" + std::to_string(n), r.has_equilibrium() && r.ratio == want, spoa_to_json(r));
    rep.add("closed form n=" + std::to_string(n), r.prediction.kind == ClosedFormSpoa::Kind::Value &&
                                                      r.prediction.value == r.ratio,
            to_string(r.prediction.value));
  }
  return rep;
}

inline ReproReport recipe_star_theorem(const RecipeOptions& opt) {
  ReproReport rep{"star-theorem", {}};
  for (int n : {4, 5, 6})
    for (const Rational& a : {Rational(2), Rational(5, 2), Rational(10)}) {
      const GameParams params(n, a);
      const auto stars = all_rational_stars(n);
      std::map<CanonicalForm, std::size_t> classes;
      std::vector<StrategyProfile> reps;
      for (const auto& s : stars)
        if (classes.emplace(canonical_form(s), reps.size()).second) reps.push_back(s);
      std::vector<char> ok(reps.size(), 0);
      std::vector<std::uint64_t> nodes(reps.size(), 0);
      parallel_for(reps.size(), opt.parallelism, [&](std::size_t c) {
        const auto r = is_strong_equilibrium(reps[c], params);
        ok[c] = r.verdict == SeVerdict::Yes;
        nodes[c] = r.nodes_explored;
      });
      std::uint64_t total_nodes = 0;
      for (auto v : nodes) total_nodes += v;
      const bool all_ok = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
      rep.add("n=" + std::to_string(n) + " alpha=" + to_string(a), all_ok,
              Json{{"stars", stars.size()}, {"classes", reps.size()}, {"nodes_explored", total_nodes}});
    }
  return rep;
}

inline ReproReport recipe_example1_check(const RecipeOptions& opt) {
  ReproReport rep{"example1-check", {}};
  Json table = Json::array();
  bool all_match = true;
  for (int A : {4, 5, 6})
    for (int k : {1, 2, 3, 4}) {
      const Example1Params p{A, k};
      const auto lay = example1_layout(p);
      const auto s = make_example1(p);
      const auto g = build_graph(s);
      const auto want = example1_class_costs(p);
      auto class_ok = [&](const std::vector<Player>& cls, std::int64_t v) {
        return std::all_of(cls.begin(), cls.end(), [&](Player i) {
          return distance_cost(g, i) == ExtendedDistance(static_cast<std::uint64_t>(v));
        });
      };
      const bool ok = class_ok({lay.root}, want.root) && class_ok(lay.middle, want.middle) &&
                      class_ok(lay.l2, want.l2) && class_ok(lay.l1, want.l1);
      all_match = all_match && ok;
      table.push_back(Json{{"A", A}, {"k", k}, {"R", want.root}, {"middle", want.middle}, {"L2", want.l2},
                           {"L1", want.l1}, {"match", ok}});
    }
  rep.add("class distance costs", all_match, table);
  const auto s = make_example1({4, 2});
  const GameParams params(10, Rational(20));
  const auto r2 = find_improving_coalition(s, params, {2, kUnlimited, std::numeric_limits<std::uint64_t>::max()},
                                           false, {}, opt.parallelism);
  rep.add("A=4 k=2 alpha=20 coalitions <= 2", r2.status == SearchStatus::NoWitness,
          Json{{"status", to_string(r2.status)}, {"nodes_explored", r2.nodes_explored}});
  const auto r3 = find_improving_coalition(s, params, {3, kUnlimited, 100'000'000}, false, {}, opt.parallelism);
  rep.add("A=4 k=2 alpha=20 coalitions <= 3 within 1e8 nodes", r3.status == SearchStatus::NoWitness,
          Json{{"status", to_string(r3.status)}, {"nodes_explored", r3.nodes_explored}});
  return rep;
}

inline ReproReport recipe_hs_strict_nash(const RecipeOptions& opt) {
  ReproReport rep{"hs-strict-nash", {}};
  const auto s = make_hoffman_singleton();
  const auto g = build_graph(s);
  bool srg = g.n() == 50 && g.edge_count() == 175;
  for (Player u = 0; u < 50 && srg; ++u) {
    if (g.degree(u) != 7) srg = false;
    for (Player v = u + 1; v < 50; ++v) {
      int common = 0;
      for (Player w : g.neighbors(u))
        if (g.has_edge(w, v)) ++common;
      if (common != (g.has_edge(u, v) ? 0 : 1)) srg = false;
    }
  }
  rep.add("7-regular, adjacent pairs 0 and non-adjacent pairs 1 common neighbour", srg);
  bool all91 = true;
  for (Player i = 0; i < 50; ++i)
    if (distance_cost(g, i) != ExtendedDistance(91)) all91 = false;
  rep.add("distance cost 91 for every player", all91);
  int four = 0, three = 0;
  for (Player i = 0; i < 50; ++i) {
    if (s.strategy(i).size() == 4) ++four;
    if (s.strategy(i).size() == 3) ++three;
  }
  rep.add("out-degrees 25 x 4 and 25 x 3", four == 25 && three == 25);
  const auto strict5 = is_nash(s, GameParams(50, Rational(5)), true, opt.parallelism);
  bool caps_ok = true;
  for (Player i = 0; i < 50; ++i)
    if (strict5.max_cardinality[static_cast<std::size_t>(i)] != static_cast<int>(s.strategy(i).size()))
      caps_ok = false;
  rep.add("alpha=5 strict Nash", strict5.is_nash, Json{{"evaluations", strict5.evaluations}});
  rep.add("alpha=5 cardinality caps equal out-degree", caps_ok);
  const auto edge = is_nash(s, GameParams(50, Rational(26, 3)), true, opt.parallelism);
  Json w = edge.witness ? witness_to_json(*edge.witness) : Json(nullptr);
  rep.add("alpha=26/3 cost-equal deviation exists",
          !edge.is_nash && edge.witness && edge.witness->delta(0).value == Rational(0), w);
  return rep;
}

inline ReproReport recipe_cfip_cycles(const RecipeOptions& opt) {
  ReproReport rep{"cfip-cycles", {}};
  const GameParams half(3, Rational(1, 2));
  const auto start = make_cfip3_profile(3);
  const std::vector<Move> script{make_move(start, half, {1, 2}, {{2}, {}}),
                                 make_move(start, half, {0, 2}, {{}, {0}}),
                                 make_move(start, half, {0, 1}, {{1}, {}})};
  const auto path = run_dynamics(start, half, Policy::adversarial_replay(script), 10);
  rep.add("cfip3 alpha=1/2 cycle period 3",
          path.termination == Termination::CycleDetected && path.period == 3 && validate_path(path, half),
          path_summary_to_json(path, half));
  const GameParams p4(4, Rational(3, 2));
  const auto star = make_standard(Shape::Star, 4, parse_pattern("leaves-buy"));
  MoveGraph graph(p4, true, PathTarget::Strong);
  const auto cyc = find_improvement_cycle(star, graph, 1u << 16);
  bool cycle_ok = false;
  Json payload = nullptr;
  if (cyc) {
    const auto replay = run_dynamics(star, p4, Policy::scripted(*cyc), cyc->size() + 1);
    cycle_ok = replay.termination == Termination::CycleDetected && validate_path(replay, p4);
    payload = path_summary_to_json(replay, p4);
  }
  rep.add("4-star alpha=3/2 coalitional cycle", cycle_ok, payload);
  return rep;
}

inline ReproReport recipe_tree_script(const RecipeOptions& opt) {
  ReproReport rep{"tree-script", {}};
  std::mt19937_64 rng(opt.seed);
  for (const Rational& a : {Rational(2), Rational(3), Rational(7, 2)}) {
    const GameParams params(8, a);
    int ok = 0, steps = 0;
    for (int t = 0; t < 100; ++t) {
      const auto tree = random_tree_profile(8, rng);
      const auto path = script_tree_to_star(tree, params);
      const auto fin = path.final_profile();
      if (validate_path(path, params) && graph_properties(build_graph(fin)).is_star && is_rational(fin)) ++ok;
      steps += static_cast<int>(path.moves.size());
    }
    rep.add("n=8 alpha=" + to_string(a) + " 100 random trees", ok == 100, Json{{"ok", ok}, {"total_steps", steps}});
  }
  return rep;
}

}  // namespace detail

inline const std::vector<std::string>& recipe_names() {
  static const std::vector<std::string> names{"alpha1-spoa",    "star-theorem", "example1-check",
                                              "hs-strict-nash", "cfip-cycles",  "tree-script"};
  return names;
}

inline ReproReport run_reproduction(const std::string& recipe, const RecipeOptions& opt = {}) {
  if (recipe == "alpha1-spoa") return detail::recipe_alpha1_spoa(opt);
  if (recipe == "star-theorem") return detail::recipe_star_theorem(opt);
  if (recipe == "example1-check") return detail::recipe_example1_check(opt);
  if (recipe == "hs-strict-nash") return detail::recipe_hs_strict_nash(opt);
  if (recipe == "cfip-cycles") return detail::recipe_cfip_cycles(opt);
  if (recipe == "tree-script") return detail::recipe_tree_script(opt);
  throw InvalidParams("unknown recipe '" + recipe + "'");
}

}  // namespace ncg
