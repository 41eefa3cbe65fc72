// ncg: command-line workbench for network creation games.
//
// Exit codes: 0 verdict produced / pass, 1 assertion or recipe failure,
// 2 usage or input error, 3 budget or cap exhausted.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ncg/ncg.hpp"

namespace {

using namespace ncg;

constexpr int kExitPass = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;

struct Globals {
  int threads = 0;  // 0: NCG_THREADS or hardware
  std::uint64_t seed = kDefaultSeed;
  std::string manifest;
};

Parallelism resolve_threads(const Globals& g) {
  if (g.threads > 0) return {static_cast<unsigned>(g.threads)};
  if (const char* env = std::getenv("NCG_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return {static_cast<unsigned>(v)};
    } catch (const std::exception&) {
    }
    throw InvalidParams("NCG_THREADS must be a positive integer");
  }
  return Parallelism::hardware();
}

void emit(const std::string& text, const std::string& path, RunManifest& m) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  write_file(path, text.back() == '\n' ? text : text + "\n");
  m.output_paths.push_back(path);
}

std::pair<StrategyProfile, GameParams> load(const std::string& path, RunManifest& m) {
  const auto text = read_file(path);
  m.input_hashes[path] = content_hash(text);
  return parse_profile_json(text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network creation game workbench"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--threads", g.threads, "worker count (overrides NCG_THREADS)")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "seed for randomized recipes");
  app.add_option("--manifest", g.manifest, "write a run manifest JSON here");

  RunManifest manifest;
  int exit_code = kExitPass;
  std::function<void()> action;

  // construct
  auto* construct = app.add_subcommand("construct", "build a profile family");
  std::string family, pattern, alpha_text = "1", out_path, dot_path;
  int n = 4, A = 4, k = 1;
  construct->add_option("family", family, "star|cycle|complete|path|example1|hoffman-singleton|cfip3")->required();
  construct->add_option("--n", n, "player count");
  construct->add_option("--A", A, "diameter-4 tree: number of buyers A");
  construct->add_option("--k", k, "diameter-4 tree: purchases per middle player k");
  construct->add_option("--pattern", pattern, "buyer pattern");
  construct->add_option("--alpha", alpha_text, "edge price stored in the file");
  construct->add_option("--out", out_path, "profile JSON output (default stdout)");
  construct->add_option("--dot", dot_path, "also write DOT here");
  construct->callback([&] {
    action = [&] {
      StrategyProfile s;
      if (family == "example1") s = make_example1({A, k});
      else if (family == "hoffman-singleton") s = make_hoffman_singleton();
      else if (family == "cfip3") s = make_cfip3_profile(construct->count("--n") ? n : 3);
      else {
        const Shape shape = parse_shape(family);
        s = make_standard(shape, n, parse_pattern(pattern.empty() ? default_pattern(shape) : pattern));
      }
      const GameParams params(s.n(), parse_rational(alpha_text));
      emit(profile_to_json(s, params).dump(2), out_path, manifest);
      if (!dot_path.empty()) {
        export_dot(s, dot_path);
        manifest.output_paths.push_back(dot_path);
      }
    };
  });

  // verify
  auto* verify = app.add_subcommand("verify", "equilibrium checks for a profile");
  std::string profile_path, mode = "strong", override_alpha;
  int max_size = 3, bonus = kUnlimited;
  std::uint64_t node_cap = 100'000'000;
  bool unbounded = false;
  verify->add_option("--profile", profile_path, "profile JSON")->required();
  verify->add_option("--mode", mode, "nash|strict-nash|strong|strict-strong|oracle|conditions")
      ->check(CLI::IsMember({"nash", "strict-nash", "strong", "strict-strong", "oracle", "conditions"}));
  verify->add_option("--alpha", override_alpha, "override the file's alpha");
  verify->add_option("--max-size", max_size, "largest coalition");
  verify->add_option("--bonus", bonus, "extra purchases allowed beyond |s_i|");
  verify->add_option("--node-cap", node_cap, "search node cap");
  verify->add_flag("--unbounded", unbounded, "all coalition sizes, no node cap");
  verify->add_option("--out", out_path, "output JSON (default stdout)");
  verify->callback([&] {
    action = [&] {
      auto [s, params] = load(profile_path, manifest);
      if (!override_alpha.empty()) params = GameParams(params.n, parse_rational(override_alpha));
      const auto par = resolve_threads(g);
      Json j;
      if (mode == "nash" || mode == "strict-nash") {
        const auto r = is_nash(s, params, mode == "strict-nash", par);
        j = Json{{"verdict", r.is_nash ? "yes" : "no"}};
        if (r.witness) j["witness"] = witness_to_json(*r.witness);
        j["evaluations"] = r.evaluations;
      } else if (mode == "oracle") {
        const auto p = theory_oracle(s, params);
        j = Json{{"verdict", to_string(p.verdict)}, {"reason", p.reason}};
      } else if (mode == "conditions") {
        Json list = Json::array();
        for (const auto& v : necessary_conditions(s, params, par)) {
          Json e{{"condition", v.condition}, {"detail", v.detail}, {"vertices", players_to_json(v.vertices)}};
          if (v.witness) e["witness"] = witness_to_json(*v.witness);
          list.push_back(e);
        }
        j = Json{{"violations", list}};
      } else {
        const SearchBudget b = unbounded ? SearchBudget::unbounded() : SearchBudget{max_size, bonus, node_cap};
        const auto r = is_strong_equilibrium(s, params, b, mode == "strict-strong", {}, par);
        j = verdict_to_json(r);
        if (r.verdict == SeVerdict::Inconclusive) exit_code = kExitCap;
      }
      emit(j.dump(2), out_path, manifest);
    };
  });

  // dynamics
  auto* dyn = app.add_subcommand("dynamics", "run improvement dynamics");
  std::string policy = "br", trace_path, dot_prefix;
  std::size_t max_steps = 1000;
  int dot_every = 0;
  bool detect_iso = false;
  dyn->add_option("--profile", profile_path, "start profile JSON")->required();
  dyn->add_option("--policy", policy, "br|first|coalition:k|script-alpha1|script-tree");
  dyn->add_option("--max-steps", max_steps, "step cap")->check(CLI::PositiveNumber);
  dyn->add_flag("--detect-iso", detect_iso, "detect revisits up to isomorphism");
  dyn->add_option("--trace", trace_path, "JSONL trace output");
  dyn->add_option("--dot-every", dot_every, "DOT snapshot every k states");
  dyn->add_option("--dot-prefix", dot_prefix, "DOT snapshot path prefix");
  dyn->add_option("--out", out_path, "summary JSON (default stdout)");
  dyn->callback([&] {
    action = [&] {
      const auto [s, params] = load(profile_path, manifest);
      DynamicsOptions opts;
      opts.detect_iso = detect_iso;
      opts.parallelism = resolve_threads(g);
      opts.potentials = {PotentialKind::SingleBuyerCount};
      if (s.n() == 3) opts.potentials.push_back(PotentialKind::WeightedN3);
      PathRecord path;
      if (policy == "script-alpha1") path = script_alpha1_to_strong(s, params);
      else if (policy == "script-tree") path = script_tree_to_star(s, params);
      else if (policy == "br") path = run_dynamics(s, params, Policy::best_response(), max_steps, opts);
      else if (policy == "first") path = run_dynamics(s, params, Policy::first_improvement(), max_steps, opts);
      else if (policy.starts_with("coalition:"))
        path = run_dynamics(s, params, Policy::coalitional(std::stoi(policy.substr(10))), max_steps, opts);
      else throw InvalidParams("unknown policy '" + policy + "'");
      if (!trace_path.empty()) {
        write_file(trace_path, path_to_jsonl(path));
        manifest.output_paths.push_back(trace_path);
      }
      if (dot_every > 0) {
        const std::string prefix = dot_prefix.empty() ? "state" : dot_prefix;
        for (std::size_t t = 0; t <= path.moves.size(); t += static_cast<std::size_t>(dot_every)) {
          const auto file = prefix + "_" + std::to_string(t) + ".dot";
          export_dot(path.state(t), file);
          manifest.output_paths.push_back(file);
        }
      }
      emit(path_summary_to_json(path, params).dump(2), out_path, manifest);
      if (path.termination == Termination::StepCapHit || path.termination == Termination::SearchBudgetExhausted)
        exit_code = kExitCap;
    };
  });

  // enumerate
  auto* en = app.add_subcommand("enumerate", "all strong equilibria for n <= 5");
  std::string alpha_arg;
  bool no_prefilter = false;
  en->add_option("--n", n, "player count")->required();
  en->add_option("--alpha", alpha_arg, "edge price")->required();
  en->add_flag("--no-prefilter", no_prefilter, "disable the n=5 Nash and complement-forest filters");
  en->add_option("--out", out_path, "output JSON (default stdout)");
  en->callback([&] {
    action = [&] {
      const GameParams params(n, parse_rational(alpha_arg));
      const auto r = enumerate_strong_equilibria(params, {!no_prefilter, resolve_threads(g)});
      Json list = Json::array();
      for (const auto& s : r.equilibria) list.push_back(strategies_to_json(s));
      emit(Json{{"n", n},
                {"alpha", to_string(params.alpha)},
                {"count", r.equilibria.size()},
                {"profiles_scanned", r.profiles_scanned},
                {"candidates_checked", r.candidates_checked},
                {"classes_searched", r.classes_searched},
                {"equilibria", list}}
               .dump(2),
           out_path, manifest);
    };
  });

  // spoa
  auto* spoa = app.add_subcommand("spoa", "strong price of anarchy");
  bool brute = false;
  spoa->add_option("--n", n, "player count")->required();
  spoa->add_option("--alpha", alpha_arg, "edge price")->required();
  spoa->add_flag("--brute-force", brute, "brute-force social optimum");
  spoa->add_option("--out", out_path, "output JSON (default stdout)");
  spoa->callback([&] {
    action = [&] {
      const GameParams params(n, parse_rational(alpha_arg));
      const auto r = strong_price_of_anarchy(params, {true, resolve_threads(g)},
                                             brute ? OptimumMode::BruteForce : OptimumMode::ClosedForm);
      emit(spoa_to_json(r).dump(2), out_path, manifest);
    };
  });

  // spoa-sequence
  auto* seq = app.add_subcommand("spoa-sequence", "lower-bound ratio sequence as CSV");
  int x_min = 4, x_max = 20;
  seq->add_option("--x-min", x_min, "first x")->check(CLI::Range(4, 1000));
  seq->add_option("--x-max", x_max, "last x")->check(CLI::Range(4, 1000));
  seq->add_option("--out", out_path, "CSV output (default stdout)");
  seq->callback([&] {
    action = [&] {
      std::string csv = "x,n,alpha,cost_se,cost_opt,ratio_num,ratio_den\n";
      for (int x = x_min; x <= x_max; ++x) {
        const auto r = example1_ratio(x);
        if (!r.bounds_hold()) exit_code = kExitFailure;
        csv += std::to_string(x) + "," + std::to_string(r.n) + "," + to_string(r.alpha) + "," +
               to_string(r.cost_se) + "," + to_string(r.cost_opt) + "," + std::to_string(r.ratio.numerator()) +
               "," + std::to_string(r.ratio.denominator()) + "\n";
      }
      emit(csv, out_path, manifest);
    };
  });

  // export-dot
  auto* dot = app.add_subcommand("export-dot", "profile JSON to DOT");
  dot->add_option("--profile", profile_path, "profile JSON")->required();
  dot->add_option("--out", out_path, "DOT output (default stdout)");
  dot->callback([&] {
    action = [&] {
      const auto [s, params] = load(profile_path, manifest);
      emit(to_dot(s), out_path, manifest);
    };
  });

  // repro
  auto* repro = app.add_subcommand("repro", "run a reproduction recipe");
  std::string recipe;
  repro->add_option("recipe", recipe, "recipe name")->required()->check(CLI::IsMember(recipe_names()));
  repro->add_option("--out", out_path, "report JSON (default stdout)");
  repro->callback([&] {
    action = [&] {
      const auto report = run_reproduction(recipe, {resolve_threads(g), g.seed});
      emit(report.to_json().dump(2), out_path, manifest);
      if (!report.passed()) {
        std::cerr << "recipe failed: " << report.first_failure()->name << "\n";
        exit_code = kExitFailure;
      }
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    action();
  } catch (const ScriptAssertion& e) {
    std::cerr << "assertion failed: " << e.what() << "\n";
    return kExitFailure;
  } catch (const RecipeFailed& e) {
    std::cerr << e.what() << "\n";
    return kExitFailure;
  } catch (const StateCapHit& e) {
    std::cerr << e.what() << "\n";
    return kExitCap;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::logic_error& e) {
    std::cerr << "internal check failed: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!g.manifest.empty()) {
    manifest.command = app.get_subcommands().front()->get_name();
    for (const auto* opt : app.get_subcommands().front()->get_options())
      if (opt->count() > 0 && !opt->get_name().empty() && opt->get_name() != "--help")
        manifest.parameters[opt->get_name()] = opt->as<std::string>();
    manifest.workers = resolve_threads(g).threads;
    manifest.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_file(g.manifest, manifest.to_json().dump(2) + "\n");
  }
  return exit_code;
}
