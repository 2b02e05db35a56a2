#include <catch_amalgamated.hpp>

#include <random>

#include "support.hpp"
#include "typegen/eval.hpp"

using namespace typegen;
using testing::make_catalog;

namespace {

GoldMap gm(std::initializer_list<std::pair<std::string, std::initializer_list<std::string_view>>> rows)
{
  GoldMap out;
  for (const auto &[fn, types] : rows)
    out[QualifiedName(fn)] = make_type_set(types);
  return out;
}

} // namespace

TEST_CASE("half-right prediction scores one half", "[eval]")
{
  auto m = compute_metrics(gm({{"f.x", {"a.A", "a.B"}}}), gm({{"f.x", {"a.A", "a.C"}}}));
  CHECK(m.precision == std::optional<double>(0.5));
  CHECK(m.recall == std::optional<double>(0.5));
  CHECK(m.f1 == std::optional<double>(0.5));
  CHECK(m.matched_methods == 1);
}

TEST_CASE("a perfect prediction scores one", "[eval]")
{
  auto g = gm({{"f.x", {"a.A"}}, {"f.y", {"int", "None"}}});
  auto m = compute_metrics(g, g);
  CHECK(m.precision == std::optional<double>(1.0));
  CHECK(m.recall == std::optional<double>(1.0));
  CHECK(m.f1 == std::optional<double>(1.0));
  CHECK(m.recall_all == std::optional<double>(1.0));
}

TEST_CASE("alias spellings count as correct", "[eval]")
{
  auto cat = testing::running_example_catalog();
  auto gold = gold_from_json(json{{"gold", {{{"function", "pandas.read_csv"}, {"types", {"pandas.core.frame.DataFrame"}}}}}}, cat);
  PredictionMap pred;
  add_prediction(pred, {QualifiedName("pandas.read_csv"), make_type_set({"pandas.DataFrame"}), "analysis", {}, {}});
  auto m = compute_metrics(pred, gold, cat);
  CHECK(m.precision == std::optional<double>(1.0));
  CHECK(m.recall == std::optional<double>(1.0));
}

TEST_CASE("metrics are undefined without shared functions", "[eval]")
{
  auto m = compute_metrics(gm({{"f.x", {"a.A"}}}), gm({{"f.y", {"a.A"}}}));
  CHECK_FALSE(m.precision.has_value());
  CHECK_FALSE(m.recall.has_value());
  CHECK_FALSE(m.f1.has_value());
  CHECK(m.recall_all == std::optional<double>(0.0));
  auto none = compute_metrics(GoldMap{}, GoldMap{});
  CHECK_FALSE(none.recall_all.has_value());
}

TEST_CASE("zero precision and recall give zero f1", "[eval]")
{
  auto m = compute_metrics(gm({{"f.x", {"a.B"}}}), gm({{"f.x", {"a.A"}}}));
  CHECK(m.f1 == std::optional<double>(0.0));
}

TEST_CASE("recall_all counts gold functions with no prediction", "[eval]")
{
  auto m = compute_metrics(gm({{"f.x", {"a.A"}}}), gm({{"f.x", {"a.A"}}, {"f.y", {"a.B", "a.C", "a.D"}}}));
  CHECK(m.recall == std::optional<double>(1.0));
  CHECK(m.recall_all == std::optional<double>(0.25));
}

TEST_CASE("gold documents are validated", "[eval]")
{
  auto cat = testing::running_example_catalog();
  CHECK_THROWS_AS(gold_from_json(json::object(), cat), InputError);
  CHECK_THROWS_AS(gold_from_json(json{{"gold", {{{"function", "a.f"}, {"types", json::array()}}}}}, cat), InputError);
  CHECK_THROWS_AS(gold_from_json(json{{"gold", {{{"function", "a..f"}, {"types", {"int"}}}}}}, cat), InputError);
}

TEST_CASE("confusion pairs follow category and exact matches", "[eval]")
{
  auto cat = make_catalog({{"u.A", {"m"}, {}}, {"u.B", {"m"}, {}}});
  auto cm = confusion(gm({{"f.x", {"u.A", "u.B", "int"}}}), gm({{"f.x", {"u.A"}}}), cat);
  CHECK(cm.pairs == 3);
  CHECK(cm.class_class_correct == 1);
  CHECK(cm.cell(TypeCategory::UserClass, TypeCategory::UserClass) == 1);
  CHECK(cm.cell(TypeCategory::UserClass, TypeCategory::Primitive) == 1);
  auto report = report_to_json(compute_metrics(gm({{"f.x", {"u.A"}}}), gm({{"f.x", {"u.A"}}})), cm);
  CHECK(report["confusion"]["pairs"] == 3);
  CHECK(report["metrics"]["precision"] == 1.0);
  CHECK(render_report(Metrics{}, cm).find("(1)") != std::string::npos);
}

TEST_CASE("confusion totals reconcile with pair counts on random fixtures", "[eval][property]")
{
  auto cat = make_catalog({{"u.A", {"m"}, {}}, {"u.B", {"m"}, {}}, {"u.C", {"m"}, {}}}, json::object(), {"mod.sub"});
  const std::vector<std::string> pool = {"u.A", "u.B", "u.C", "int", "str", "None", "Any", "list", "mod.sub", "zz.Unknown"};
  std::mt19937 rng(5);
  for (int round = 0; round < 500; ++round) {
    GoldMap pred, gold;
    long expected_pairs = 0;
    long expected_correct = 0;
    for (int f = 0; f < 6; ++f) {
      QualifiedName fn("f.x" + std::to_string(f));
      TypeSet p, g;
      for (int k = 0; k < 4; ++k) {
        if (rng() % 2)
          p.emplace(pool[rng() % pool.size()]);
        if (rng() % 2)
          g.emplace(pool[rng() % pool.size()]);
      }
      if (!p.empty())
        pred[fn] = p;
      if (!g.empty())
        gold[fn] = g;
      if (!p.empty() && !g.empty()) {
        expected_pairs += static_cast<long>(p.size());
        for (const auto &t : p)
          expected_correct += g.contains(t);
      }
    }
    auto cm = confusion(pred, gold, cat);
    long total = cm.class_class_correct;
    for (const auto &[k, n] : cm.cells)
      total += n;
    REQUIRE(total == cm.pairs);
    REQUIRE(cm.pairs == expected_pairs);
    auto m = compute_metrics(pred, gold);
    REQUIRE(m.predicted_instances == expected_pairs);
    REQUIRE(m.correct_instances == expected_correct);
    long diagonal = cm.class_class_correct;
    for (auto c : kAllCategories)
      if (c != TypeCategory::UserClass)
        diagonal += cm.cell(c, c);
    REQUIRE(diagonal >= m.correct_instances);
  }
}
