#pragma once

// Profile files, verdict/trace JSON and DOT. Player labels are 1-based in
// every external format.

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ncg/dynamics.hpp"
#include "ncg/equilibrium.hpp"
#include "ncg/game.hpp"
#include "ncg/metrics.hpp"
#include "ncg/rational.hpp"

namespace ncg {

using Json = nlohmann::ordered_json;

class SchemaError : public Error {
 public:
  SchemaError(std::string where, const std::string& what)
      : Error(where + ": " + what), where_(std::move(where)) {}
  [[nodiscard]] const std::string& where() const { return where_; }

 private:
  std::string where_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

inline Json strategies_to_json(const StrategyProfile& s) {
  Json st = Json::array();
  for (Player i = 0; i < s.n(); ++i) {
    Json row = Json::array();
    for (Player j : s.strategy(i)) row.push_back(j + 1);
    st.push_back(std::move(row));
  }
  return st;
}

inline Json profile_to_json(const StrategyProfile& s, const GameParams& params) {
  return Json{{"n", s.n()}, {"alpha", to_string(params.alpha)}, {"strategies", strategies_to_json(s)}};
}

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

/// Parses {"n", "alpha", "strategies"} with 1-based labels.
inline std::pair<StrategyProfile, GameParams> parse_profile_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw SchemaError("line " + std::to_string(line) + ", column " + std::to_string(col), "malformed JSON");
  }
  if (!j.is_object()) throw SchemaError("$", "expected an object");
  if (!j.contains("n") || !j["n"].is_number_integer()) throw SchemaError("$.n", "missing or not an integer");
  const int n = j["n"].get<int>();
  if (n < 3) throw SchemaError("$.n", "must be at least 3");
  if (!j.contains("alpha")) throw SchemaError("$.alpha", "missing");
  Rational alpha;
  const auto& ja = j["alpha"];
  if (ja.is_string()) alpha = parse_rational(ja.get<std::string>());
  else if (ja.is_number_integer()) alpha = Rational(ja.get<std::int64_t>());
  else throw SchemaError("$.alpha", "must be a string \"p/q\" or decimal, or an integer");
  if (alpha < 0) throw SchemaError("$.alpha", "must be non-negative");
  if (!j.contains("strategies") || !j["strategies"].is_array())
    throw SchemaError("$.strategies", "missing or not an array");
  const auto& js = j["strategies"];
  if (js.size() != static_cast<std::size_t>(n))
    throw SchemaError("$.strategies", "expected " + std::to_string(n) + " rows, got " + std::to_string(js.size()));
  std::vector<std::vector<Player>> st(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < js.size(); ++i) {
    const std::string row_path = "$.strategies[" + std::to_string(i) + "]";
    if (!js[i].is_array()) throw SchemaError(row_path, "not an array");
    for (std::size_t k = 0; k < js[i].size(); ++k) {
      const std::string path = row_path + "[" + std::to_string(k) + "]";
      if (!js[i][k].is_number_integer()) throw SchemaError(path, "not an integer");
      const int label = js[i][k].get<int>();
      if (label < 1 || label > n) throw SchemaError(path, "label " + std::to_string(label) + " out of range 1.." + std::to_string(n));
      if (label == static_cast<int>(i) + 1) throw SchemaError(path, "player buys an edge to itself");
      st[i].push_back(label - 1);
    }
  }
  return {StrategyProfile(std::move(st)), GameParams(n, alpha)};
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("failed writing '" + path + "'");
}

inline std::pair<StrategyProfile, GameParams> parse_profile_file(const std::string& path) {
  return parse_profile_json(read_file(path));
}

inline Json players_to_json(const std::vector<Player>& v) {
  Json a = Json::array();
  for (Player p : v) a.push_back(p + 1);
  return a;
}

inline Json witness_to_json(const DeviationWitness& w) {
  Json repl = Json::array(), deltas = Json::array(), before = Json::array(), after = Json::array();
  for (std::size_t k = 0; k < w.size(); ++k) {
    repl.push_back(players_to_json(w.replacement[k]));
    deltas.push_back(w.delta(k).str());
    before.push_back(w.before[k].str());
    after.push_back(w.after[k].str());
  }
  return Json{{"coalition", players_to_json(w.coalition)},
              {"replacement", repl},
              {"deltas", deltas},
              {"cost_before", before},
              {"cost_after", after}};
}

inline Json budget_to_json(const SearchBudget& b) {
  auto lim = [](std::int64_t v) -> Json {
    if (v >= kUnlimited) return "unlimited";
    return v;
  };
  Json cap = b.node_cap == std::numeric_limits<std::uint64_t>::max() ? Json("unlimited") : Json(b.node_cap);
  return Json{{"max_coalition_size", lim(b.max_coalition_size)},
              {"max_strategy_cardinality_bonus", lim(b.max_strategy_cardinality_bonus)},
              {"node_cap", cap}};
}

inline Json verdict_to_json(const SeResult& r) {
  Json j{{"verdict", to_string(r.verdict)}};
  if (r.witness) j["witness"] = witness_to_json(*r.witness);
  j["budget_used"] = budget_to_json(r.budget);
  j["nodes_explored"] = r.nodes_explored;
  return j;
}

inline Json move_to_json(const Move& m, std::size_t step) {
  Json out{{"step", step}};
  out.update(witness_to_json(m));
  return out;
}

inline Json path_summary_to_json(const PathRecord& p, const GameParams& params) {
  Json j{{"termination", to_string(p.termination)}, {"steps", p.moves.size()}};
  if (p.termination == Termination::CycleDetected) {
    j["period"] = p.period;
    j["first_revisit_index"] = p.first_revisit_index;
  }
  Json pots = Json::object();
  for (const auto& [k, trace] : p.potentials) {
    Json t = Json::array();
    for (const auto& c : trace) t.push_back(c.str());
    pots[to_string(k)] = t;
  }
  if (!pots.empty()) j["potentials"] = pots;
  j["final"] = profile_to_json(p.final_profile(), params);
  return j;
}

/// One JSON object per move, newline-terminated.
inline std::string path_to_jsonl(const PathRecord& p) {
  std::string out;
  for (std::size_t k = 0; k < p.moves.size(); ++k) out += move_to_json(p.moves[k], k).dump() + "\n";
  return out;
}

/// Directed DOT: one arc buyer -> target per purchase, vertices 1..n listed
/// first so isolated players survive a round trip.
inline std::string to_dot(const StrategyProfile& s, const std::string& name = "profile") {
  std::string out = "digraph " + name + " {\n";
  for (Player i = 0; i < s.n(); ++i) out += "  " + std::to_string(i + 1) + ";\n";
  for (Player i = 0; i < s.n(); ++i)
    for (Player j : s.strategy(i)) out += "  " + std::to_string(i + 1) + " -> " + std::to_string(j + 1) + ";\n";
  out += "}\n";
  return out;
}

inline void export_dot(const StrategyProfile& s, const std::string& path) { write_file(path, to_dot(s)); }

/// Reads the subset of DOT written by to_dot.
inline StrategyProfile parse_dot(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<int, int>> arcs;
  int n = 0;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto strip = [](std::string v) {
      const auto b = v.find_first_not_of(" \t;");
      const auto e = v.find_last_not_of(" \t;");
      return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
    };
    const std::string t = strip(line);
    if (t.empty() || t.starts_with("digraph") || t == "}") continue;
    try {
      if (const auto arrow = t.find("->"); arrow != std::string::npos) {
        const int a = std::stoi(strip(t.substr(0, arrow)));
        const int b = std::stoi(strip(t.substr(arrow + 2)));
        arcs.emplace_back(a, b);
        n = std::max({n, a, b});
      } else {
        n = std::max(n, std::stoi(t));
      }
    } catch (const std::exception&) {
      throw SchemaError("line " + std::to_string(lineno), "unrecognized DOT statement '" + t + "'");
    }
  }
  std::vector<std::vector<Player>> st(static_cast<std::size_t>(n));
  for (auto [a, b] : arcs) {
    if (a < 1 || b < 1) throw SchemaError("dot", "labels must be positive");
    st[static_cast<std::size_t>(a - 1)].push_back(b - 1);
  }
  return StrategyProfile(std::move(st));
}

inline Json rational_json(const Rational& r) { return to_string(r); }

inline Json spoa_to_json(const SpoaReport& r) {
  Json j{{"n", r.params.n}, {"alpha", to_string(r.params.alpha)}, {"optimum", to_string(r.optimum)},
         {"se_count", r.se_count}};
  if (r.has_equilibrium()) {
    j["worst_se"] = to_string(r.worst_se);
    j["ratio"] = to_string(r.ratio);
    j["ratio_decimal"] = to_decimal(r.ratio);
  } else {
    j["ratio"] = nullptr;
    j["note"] = "no strong equilibrium";
  }
  Json pred{{"reason", r.prediction.reason}};
  switch (r.prediction.kind) {
    case ClosedFormSpoa::Kind::Value: pred["value"] = to_string(r.prediction.value); break;
    case ClosedFormSpoa::Kind::Bounds:
      pred["lower"] = to_string(r.prediction.lower);
      pred["upper"] = to_string(r.prediction.upper);
      break;
    case ClosedFormSpoa::Kind::Undefined: pred["value"] = nullptr; break;
  }
  j["closed_form"] = pred;
  return j;
}

}  // namespace ncg
