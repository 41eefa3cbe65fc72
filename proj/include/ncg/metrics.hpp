#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ncg/canonical.hpp"
#include "ncg/constructions.hpp"
#include "ncg/cost.hpp"
#include "ncg/equilibrium.hpp"
#include "ncg/parallel.hpp"

namespace ncg {

enum class OptimumMode { ClosedForm, BruteForce };

struct OptimumResult {
  Rational cost;
  StrategyProfile witness;
};

/// alpha < 2: rational K_n, alpha > 2: rational star; at alpha = 2 both are
/// evaluated and the cheaper kept (they tie). Brute force minimizes
/// alpha|E| + d over all graphs on n <= 6 vertices, which is the minimum
/// over rational profiles.
inline OptimumResult social_optimum_cost(const GameParams& params, OptimumMode mode = OptimumMode::ClosedForm) {
  params.validate();
  const int n = params.n;
  if (mode == OptimumMode::ClosedForm) {
    const auto complete = make_standard(Shape::Complete, n, parse_pattern("lowest-buys"));
    const auto star = make_standard(Shape::Star, n, parse_pattern("leaves-buy"));
    const Rational cc = params.alpha * (n * (n - 1) / 2) + Rational(n * (n - 1));
    const Rational cs = params.alpha * (n - 1) + Rational(2 * (n - 1) * (n - 1));
    if (params.alpha < 2) return {cc, complete};
    if (params.alpha > 2) return {cs, star};
    return cc <= cs ? OptimumResult{cc, complete} : OptimumResult{cs, star};
  }
  if (n > 6) throw TooLarge("brute-force optimum supports n <= 6");
  std::optional<OptimumResult> best;
  const int pairs = n * (n - 1) / 2;
  std::vector<std::pair<int, int>> pl;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pl.emplace_back(i, j);
  for (std::uint32_t g = 0; g < (1u << pairs); ++g) {
    std::vector<detail::Mask> out(static_cast<std::size_t>(n), 0);
    for (int t = 0; t < pairs; ++t)
      if ((g >> t) & 1u) out[static_cast<std::size_t>(pl[static_cast<std::size_t>(t)].first)] |=
          detail::bit(pl[static_cast<std::size_t>(t)].second);
    const auto adj = detail::adjacency(out);
    std::uint64_t d = 0;
    bool connected = true;
    for (int i = 0; i < n && connected; ++i) {
      const auto di = detail::distance_sum(adj, i);
      if (di.is_infinite()) connected = false;
      else d += di.value();
    }
    if (!connected) continue;
    const Rational cost = params.alpha * std::popcount(g) + Rational(static_cast<std::int64_t>(d));
    if (!best || cost < best->cost) best = OptimumResult{cost, detail::from_masks(out)};
  }
  return *best;
}

struct EnumerationOptions {
  /// n = 5 only: skip non-Nash profiles and, for alpha < 2, profiles whose
  /// complement has a cycle, before any coalition search.
  bool prefilter = true;
  Parallelism parallelism{};
};

struct EnumerationResult {
  std::vector<StrategyProfile> equilibria;  // in enumeration order
  std::size_t profiles_scanned = 0;
  std::size_t candidates_checked = 0;  // after prefiltering
  std::size_t classes_searched = 0;    // distinct canonical forms searched
};

/// All rational strong equilibria for n <= 5, by complete coalition search
/// over one representative per isomorphism class.
inline EnumerationResult enumerate_strong_equilibria(const GameParams& params, const EnumerationOptions& opt = {}) {
  params.validate();
  const int n = params.n;
  if (n > 5) throw TooLarge("strong equilibrium enumeration supports n <= 5");
  EnumerationResult res;
  std::vector<std::vector<detail::Mask>> candidates;
  std::vector<std::size_t> class_of;
  std::map<CanonicalForm, std::size_t> classes;
  std::vector<std::vector<detail::Mask>> reps;
  for_each_rational_profile(n, [&](const std::vector<detail::Mask>& out) {
    ++res.profiles_scanned;
    if (n == 5 && opt.prefilter) {
      const auto s = detail::from_masks(out);
      if (params.alpha < 2 && !complement_is_forest(build_graph(s)).is_forest) return true;
      if (!is_nash(s, params).is_nash) return true;
    }
    auto form = canonical_form(out);
    auto [it, inserted] = classes.emplace(std::move(form), reps.size());
    if (inserted) reps.push_back(out);
    candidates.push_back(out);
    class_of.push_back(it->second);
    return true;
  });
  res.candidates_checked = candidates.size();
  res.classes_searched = reps.size();
  std::vector<char> verdict(reps.size(), 0);
  parallel_for(reps.size(), opt.parallelism, [&](std::size_t c) {
    const auto r = is_strong_equilibrium(detail::from_masks(reps[c]), params);
    if (r.verdict == SeVerdict::Inconclusive) throw std::logic_error("unbounded search was inconclusive");
    verdict[c] = r.verdict == SeVerdict::Yes;
  });
  for (std::size_t k = 0; k < candidates.size(); ++k)
    if (verdict[class_of[k]]) res.equilibria.push_back(detail::from_masks(candidates[k]));
  return res;
}

struct ClosedFormSpoa {
  enum class Kind { Value, Undefined, Bounds };
  Kind kind = Kind::Undefined;
  Rational value{0};
  Rational lower{0}, upper{0};
  std::string reason;
};

inline ClosedFormSpoa spoa_closed_form(const GameParams& params) {
  params.validate();
  using K = ClosedFormSpoa::Kind;
  const Rational& a = params.alpha;
  const int n = params.n;
  if (a < 1) return {K::Value, Rational(1), {}, {}, "alpha<1: strong equilibria are complete graphs"};
  if (a == Rational(1)) {
    if (n <= 4) return {K::Value, Rational(10, 9), {}, {}, "alpha=1, n in {3,4}"};
    return {K::Value, Rational(3 * n + 2, 3 * n), {}, {}, "alpha=1, n>=5: (3n+2)/3n"};
  }
  if (a < 2) {
    if (n == 3) return {K::Value, (2 * a + 8) / (3 * a + 6), {}, {}, "1<alpha<2, n=3: (2a+8)/(3a+6)"};
    if (n == 4) return {K::Value, (4 * a + 16) / (6 * a + 12), {}, {}, "1<alpha<2, n=4: (4a+16)/(6a+12)"};
    return {K::Undefined, {}, {}, {}, "1<alpha<2, n>=5: no strong equilibrium"};
  }
  return {K::Bounds, {}, Rational(3, 2), Rational(2), "alpha>=2: between 3/2 and 2"};
}

struct SpoaReport {
  GameParams params;
  Rational optimum{0};
  Rational worst_se{0};
  Rational ratio{0};
  std::size_t se_count = 0;
  std::optional<StrategyProfile> worst_profile;
  ClosedFormSpoa prediction;
  [[nodiscard]] bool has_equilibrium() const { return se_count > 0; }
};

inline SpoaReport strong_price_of_anarchy(const GameParams& params, const EnumerationOptions& opt = {},
                                          OptimumMode mode = OptimumMode::ClosedForm) {
  SpoaReport rep{params, {}, {}, {}, 0, std::nullopt, spoa_closed_form(params)};
  rep.optimum = social_optimum_cost(params, mode).cost;
  const auto en = enumerate_strong_equilibria(params, opt);
  rep.se_count = en.equilibria.size();
  for (const auto& s : en.equilibria) {
    const Cost c = social_cost(s, params);
    if (!rep.worst_profile || c.value() > rep.worst_se) {
      rep.worst_se = c.value();
      rep.worst_profile = s;
    }
  }
  if (rep.se_count > 0) rep.ratio = rep.worst_se / rep.optimum;
  return rep;
}

struct Example1Ratio {
  int x = 0;
  int n = 0;
  Rational alpha{0};
  Rational cost_se{0};
  Rational cost_opt{0};
  Rational ratio{0};
  Rational lower_bound{0};  // bound on C(s)
  Rational upper_bound{0};  // bound on the optimum
  [[nodiscard]] bool bounds_hold() const { return cost_se >= lower_bound && cost_opt <= upper_bound; }
};

/// The diameter-4 tree with A = k = x at alpha = 2n against the star optimum.
inline Example1Ratio example1_ratio(int x) {
  if (x < 4) throw InvalidParams("example1_ratio needs x >= 4");
  Example1Ratio r;
  r.x = x;
  r.n = x * x + 2;
  r.alpha = Rational(2 * r.n);
  const GameParams params(r.n, r.alpha);
  const auto s = make_example1({x, x});
  r.cost_se = social_cost(s, params).value();
  r.cost_opt = social_optimum_cost(params).cost;
  r.ratio = r.cost_se / r.cost_opt;
  const std::int64_t X = x;
  r.lower_bound = Rational(6 * X * X * X * X - 12 * X * X * X + 22 * X * X - 12 * X + 8);
  r.upper_bound = Rational(4 * X * X * X * X + 12 * X * X + 8);
  return r;
}

}  // namespace ncg
