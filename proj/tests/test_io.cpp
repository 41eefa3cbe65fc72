#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "ncg/ncg.hpp"

using namespace ncg;

TEST(ProfileJson, RoundTripsRandomProfiles) {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 200; ++t) {
    const int n = 3 + static_cast<int>(rng() % 10);
    const auto s = random_profile(n, 0.3, rng);
    const GameParams params(n, Rational(static_cast<std::int64_t>(rng() % 20), 1 + static_cast<std::int64_t>(rng() % 5)));
    const auto [back, p2] = parse_profile_json(profile_to_json(s, params).dump(2));
    EXPECT_EQ(back, s);
    EXPECT_EQ(p2.n, n);
    EXPECT_EQ(p2.alpha, params.alpha);
  }
}

TEST(ProfileJson, LabelsAreOneBased) {
  const auto j = profile_to_json(make_cfip3_profile(), GameParams(3, Rational(1, 2)));
  EXPECT_EQ(j.dump(), R"({"n":3,"alpha":"1/2","strategies":[[2],[],[1]]})");
}

TEST(ProfileJson, DecimalAlpha) {
  const auto [s, p] = parse_profile_json(R"({"n":3,"alpha":"0.5","strategies":[[2],[],[1]]})");
  EXPECT_EQ(p.alpha, Rational(1, 2));
  EXPECT_EQ(s, make_cfip3_profile());
  EXPECT_EQ(parse_profile_json(R"({"n":3,"alpha":4,"strategies":[[],[],[]]})").second.alpha, Rational(4));
}

TEST(ProfileJson, SchemaErrorsNameTheField) {
  auto where = [](const std::string& text) {
    try {
      parse_profile_json(text);
    } catch (const SchemaError& e) {
      return e.where();
    }
    return std::string("no error");
  };
  EXPECT_EQ(where(R"({"alpha":"1","strategies":[[],[],[]]})"), "$.n");
  EXPECT_EQ(where(R"({"n":3,"strategies":[[],[],[]]})"), "$.alpha");
  EXPECT_EQ(where(R"({"n":3,"alpha":"1","strategies":[[],[]]})"), "$.strategies");
  EXPECT_EQ(where(R"({"n":3,"alpha":"1","strategies":[[],[4],[]]})"), "$.strategies[1][0]");
  EXPECT_EQ(where(R"({"n":3,"alpha":"1","strategies":[[1],[],[]]})"), "$.strategies[0][0]");
  EXPECT_EQ(where(R"({"n":3,"alpha":"1","strategies":[[],"x",[]]})"), "$.strategies[1]");
  EXPECT_EQ(where(R"({"n":3,"alpha":"1","strategies":[[],[1.5],[]]})"), "$.strategies[1][0]");
  EXPECT_EQ(where("{\"n\":3,\n \"alpha\": }"), "line 2, column 11");
  EXPECT_THROW(parse_profile_json(R"({"n":3,"alpha":"x/y","strategies":[[],[],[]]})"), AlphaParseError);
}

TEST(Dot, RoundTripsRandomProfiles) {
  std::mt19937_64 rng(67);
  for (int t = 0; t < 200; ++t) {
    const int n = 3 + static_cast<int>(rng() % 10);
    const auto s = random_profile(n, 0.25, rng);
    EXPECT_EQ(parse_dot(to_dot(s)), s);
  }
}

TEST(Dot, Format) {
  EXPECT_EQ(to_dot(make_cfip3_profile()), "digraph profile {\n  1;\n  2;\n  3;\n  1 -> 2;\n  3 -> 1;\n}\n");
  EXPECT_THROW(parse_dot("digraph g {\n  1 -> x;\n}\n"), SchemaError);
}

TEST(Files, WriteAndRead) {
  const auto path = (std::filesystem::temp_directory_path() / "ncg_io_test_profile.json").string();
  const auto s = make_example1({4, 2});
  write_file(path, profile_to_json(s, GameParams(10, Rational(20))).dump());
  const auto [back, p] = parse_profile_file(path);
  EXPECT_EQ(back, s);
  EXPECT_EQ(p.alpha, Rational(20));
  std::filesystem::remove(path);
  EXPECT_THROW(read_file(path), IoError);
}

TEST(VerdictJson, Fields) {
  const auto s = make_standard(Shape::Star, 4, parse_pattern("leaves-buy"));
  const auto r = is_strong_equilibrium(s, GameParams(4, Rational(1)));
  const auto j = verdict_to_json(r);
  EXPECT_EQ(j["verdict"], "no");
  ASSERT_TRUE(j.contains("witness"));
  EXPECT_EQ(j["witness"]["coalition"].size(), j["witness"]["replacement"].size());
  EXPECT_EQ(j["budget_used"]["max_coalition_size"], "unlimited");
  EXPECT_EQ(j["nodes_explored"], r.nodes_explored);
  const auto yes = verdict_to_json(is_strong_equilibrium(s, GameParams(4, Rational(3))));
  EXPECT_EQ(yes["verdict"], "yes");
  EXPECT_FALSE(yes.contains("witness"));
}

TEST(TraceJson, OneLinePerMove) {
  const GameParams half(3, Rational(1, 2));
  const auto start = make_cfip3_profile();
  const std::vector<Move> script{make_move(start, half, {1, 2}, {{2}, {}}), make_move(start, half, {0, 2}, {{}, {0}}),
                                 make_move(start, half, {0, 1}, {{1}, {}})};
  const auto path = run_dynamics(start, half, Policy::adversarial_replay(script), 10);
  const auto text = path_to_jsonl(path);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  const auto first = Json::parse(text.substr(0, text.find('\n')));
  EXPECT_EQ(first["step"], 0);
  EXPECT_EQ(first["coalition"], Json::parse("[2,3]"));
  const auto summary = path_summary_to_json(path, half);
  EXPECT_EQ(summary["termination"], "cycle-detected");
  EXPECT_EQ(summary["period"], 3);
}

TEST(Hash, Stable) {
  EXPECT_EQ(content_hash(""), "cbf29ce484222325");
  EXPECT_EQ(content_hash("a"), "af63dc4c8601ec8c");
}

TEST(Recipes, DeterministicAcrossThreadCounts) {
  for (const char* name : {"example1-check", "cfip-cycles", "tree-script"}) {
    const auto a = run_reproduction(name, {Parallelism{1}, kDefaultSeed});
    const auto b = run_reproduction(name, {Parallelism{2}, kDefaultSeed});
    EXPECT_TRUE(a.passed()) << name;
    EXPECT_EQ(a.to_json().dump(), b.to_json().dump()) << name;
  }
  EXPECT_THROW(run_reproduction("nothing"), InvalidParams);
}
