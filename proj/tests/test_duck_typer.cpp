#include <catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "support.hpp"
#include "typegen/corpus.hpp"
#include "typegen/duck_typer.hpp"

using namespace typegen;
using testing::make_catalog;

namespace {

Catalog pandas_array_catalog()
{
  return Catalog::load(testing::fixture("pandas_array/catalog.json"), testing::fixture("pandas_array/aliases.json"));
}

} // namespace

TEST_CASE("shared-method table for the array constructor", "[duck]")
{
  auto cat = pandas_array_catalog();
  auto scores = score_candidates(std::set<std::string>{"to_numpy", "unique"}, cat);
  std::vector<CandidateScore> expected{
      {QualifiedName("pandas.core.base.IndexOpsMixin"), 2, 5},
      {QualifiedName("pandas.core.arrays.base.ExtensionArray"), 2, 7},
      {QualifiedName("pandas.core.arrays.sparse.array.SparseArray"), 1, 3}};
  CHECK(scores == expected);
  CHECK(cleansing::keep_best(scores) ==
        make_type_set({"pandas.core.arrays.base.ExtensionArray", "pandas.core.base.IndexOpsMixin"}));
}

TEST_CASE("scores are exact intersections", "[duck]")
{
  auto cat = make_catalog({{"lib.DataFrame", {"dropna", "to_csv", "head", "drop"}, {}}, {"lib.Socket", {"send", "recv"}, {}}});
  auto scores = score_candidates(std::set<std::string>{"dropna", "to_csv"}, cat);
  REQUIRE(scores.size() == 1);
  CHECK(scores[0].class_name == QualifiedName("lib.DataFrame"));
  CHECK(scores[0].shared_count == 2);
  CHECK(score_candidates(std::set<std::string>{}, cat).empty());
  CHECK(score_candidates(std::set<std::string>{"nothing"}, cat).empty());
}

TEST_CASE("scores match a brute-force intersection on random catalogs", "[duck][property]")
{
  std::mt19937 rng(7);
  for (int round = 0; round < 200; ++round) {
    std::vector<testing::ClassSpec> specs;
    std::map<std::string, std::set<std::string>> defs;
    int n = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      std::set<std::string> ms;
      for (int k = 0; k < 6; ++k)
        if (rng() % 2)
          ms.insert("m" + std::to_string(rng() % 10));
      std::string name = "r.C" + std::to_string(i);
      defs[name] = ms;
      specs.push_back({name, {ms.begin(), ms.end()}, {}});
    }
    auto cat = make_catalog(specs);
    std::set<std::string> f;
    for (int k = 0; k < 4; ++k)
      f.insert("m" + std::to_string(rng() % 10));
    std::map<std::string, long> oracle;
    for (const auto &[cls, ms] : defs) {
      long shared = 0;
      for (const auto &m : f)
        shared += ms.contains(m);
      if (shared > 0)
        oracle[cls] = shared;
    }
    auto scores = score_candidates(f, cat);
    std::map<std::string, long> got;
    for (const auto &s : scores) {
      got[s.class_name.str()] = s.shared_count;
      REQUIRE(s.shared_count <= static_cast<long>(std::min(f.size(), defs[s.class_name.str()].size())));
    }
    REQUIRE(got == oracle);
    REQUIRE(std::is_sorted(scores.begin(), scores.end(), [](const auto &a, const auto &b) {
      return a.shared_count > b.shared_count;
    }));
  }
}

TEST_CASE("step 2 keeps the supertype of a pair", "[duck]")
{
  auto cat = make_catalog({{"h.A", {"m"}, {}}, {"h.B", {"m"}, {"h.A"}}});
  CHECK(cleansing::drop_subtypes(make_type_set({"h.A", "h.B"}), cat) == make_type_set({"h.A"}));
}

TEST_CASE("step 2 leaves no subtype pairs on random hierarchies", "[duck][property]")
{
  std::mt19937 rng(99);
  for (int round = 0; round < 300; ++round) {
    auto h = oracles::random_hierarchy(rng, 20);
    auto cat = make_catalog(h.specs);
    TypeSet input;
    for (const auto &spec : h.specs)
      if (rng() % 2)
        input.emplace(spec.name);
    auto out = cleansing::drop_subtypes(input, cat);
    auto idx = &oracles::Hierarchy::index;
    for (const auto &a : out) {
      REQUIRE(input.contains(a));
      for (const auto &b : out)
        if (a != b)
          REQUIRE_FALSE(h.reach[idx(a)][idx(b)]);
    }
    // everything dropped is covered by something kept
    for (const auto &a : input)
      if (!out.contains(a))
        REQUIRE(std::any_of(out.begin(), out.end(), [&](const QualifiedName &b) { return h.reach[idx(a)][idx(b)]; }));
    if (!input.empty())
      REQUIRE_FALSE(out.empty());
  }
}

TEST_CASE("step 3 narrows to a strict-majority supertype", "[duck]")
{
  auto cat = make_catalog({{"h.S", {"x"}, {}}, {"h.B1", {"m"}, {"h.S"}}, {"h.B2", {"m"}, {"h.S"}}, {"h.X", {"m"}, {}}});
  CHECK(cleansing::majority_supertype(make_type_set({"h.B1", "h.B2", "h.X"}), cat, 0.5) ==
        make_type_set({"h.B1", "h.B2"}));
  // exactly half is not a majority
  CHECK(cleansing::majority_supertype(make_type_set({"h.B1", "h.X"}), cat, 0.5) == make_type_set({"h.B1", "h.X"}));
  // a stricter threshold keeps the set
  CHECK(cleansing::majority_supertype(make_type_set({"h.B1", "h.B2", "h.X"}), cat, 0.7).size() == 3);
}

TEST_CASE("step 4 drops modules and step 5 canonicalises", "[duck]")
{
  json aliases = {{"aliases", {{{"alias", "pkg.Frame"}, {"canonical", "pkg.core.Frame"}}}}, {"invalid", {"pkg.Bad"}}};
  auto cat = make_catalog({{"pkg.core.Frame", {"m"}, {}}, {"pkg.Bad", {"m"}, {}}}, aliases, {"pkg.io"});
  CHECK(cleansing::drop_modules(make_type_set({"pkg.io", "pkg.core.Frame"}), cat) == make_type_set({"pkg.core.Frame"}));
  CHECK(cleansing::normalize_all(make_type_set({"pkg.Frame", "pkg.Bad"}), cat) == make_type_set({"pkg.core.Frame"}));
  std::vector<CandidateScore> module_only{{QualifiedName("pkg.io"), 1, 1}};
  CHECK(cleanse_analysis_types(module_only, cat).empty());
}

TEST_CASE("final types are canonical and among the candidates", "[duck]")
{
  auto cat = testing::running_example_catalog();
  auto usages = analyze_corpus(testing::fixture("running_example/corpus"));
  auto preds = duck_type_all(usages, cat);
  REQUIRE_FALSE(preds.empty());
  CHECK(std::is_sorted(preds.begin(), preds.end(),
                       [](const auto &a, const auto &b) { return a.api_path < b.api_path; }));
  bool found = false;
  for (const auto &p : preds) {
    for (const auto &t : p.final_types) {
      CHECK(cat.normalize(t) == std::optional<QualifiedName>(t));
      CHECK(std::any_of(p.candidates.begin(), p.candidates.end(), [&](const CandidateScore &c) {
        return cat.normalize(c.class_name) == std::optional<QualifiedName>(t);
      }));
    }
    if (p.api_path == "pandas.read_csv()") {
      found = true;
      CHECK(p.final_types == make_type_set({"pandas.core.frame.DataFrame"}));
      CHECK(p.function == QualifiedName("pandas.read_csv"));
    }
  }
  CHECK(found);
  CHECK(duck_type_all(UsageMap{}, cat).empty());
}

TEST_CASE("a constructor path maps to its class", "[duck]")
{
  auto cat = make_catalog({{"mylib.C", {"alpha", "beta", "gamma"}, {}}, {"mylib.D", {"delta"}, {}}});
  UsageMap u;
  u.observe("mylib.C()", "alpha");
  u.observe("mylib.C()", "gamma");
  u.observe("mylib", "C");
  auto preds = duck_type_all(u, cat);
  REQUIRE(preds.size() == 1);
  CHECK(preds[0].final_types == make_type_set({"mylib.C"}));
  auto map = to_prediction_map(preds);
  CHECK(map.at(QualifiedName("mylib.C")).scores.at("mylib.C") == 2);
}

TEST_CASE("only call paths name functions", "[duck]")
{
  auto cat = testing::running_example_catalog();
  CHECK(function_for_path("pandas", cat) == std::nullopt);
  CHECK(function_for_path("pandas.read_csv()", cat) == std::optional<QualifiedName>(QualifiedName("pandas.read_csv")));
  // derived strict paths name the method reached through the chain
  CHECK(function_for_path("pandas.read_csv().dropna()", cat)->str() == "pandas.read_csv().dropna");
  CHECK(function_for_path("pandas.DataFrame()", cat)->str() == "pandas.core.frame.DataFrame");
}
