#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "support.hpp"
#include "typegen/corpus.hpp"

using namespace typegen;
using testing::TempDir;
using testing::write_text;

TEST_CASE("running-example corpus merges both scripts", "[corpus]")
{
  auto u = analyze_corpus(testing::fixture("running_example/corpus"));
  CHECK(u.files_analyzed == 2);
  CHECK(u.files_failed == 0);
  CHECK(u.methods("pandas.read_csv()") == std::set<std::string>{"dropna", "to_csv"});
  CHECK(u.records.at("pandas").at("read_csv") == 2);
}

TEST_CASE("an empty directory gives an empty map", "[corpus]")
{
  TempDir dir;
  auto u = analyze_corpus(dir.path());
  CHECK(u.records.empty());
  CHECK(u.files_analyzed == 0);
}

TEST_CASE("a missing directory is an input error", "[corpus]")
{
  TempDir dir;
  CHECK_THROWS_AS(analyze_corpus(dir / "nope"), InputError);
}

TEST_CASE("unparseable files are counted and skipped", "[corpus]")
{
  TempDir dir;
  write_text(dir / "good.py", "import os\nos.getcwd().strip()\n");
  write_text(dir / "bad.py", "print 'python 2'\n");
  write_text(dir / "notes.txt", "import ignored\nignored.x()\n");
  auto u = analyze_corpus(dir.path());
  CHECK(u.files_analyzed == 1);
  CHECK(u.files_failed == 1);
  CHECK(u.methods("os.getcwd()") == std::set<std::string>{"strip"});
  CHECK(u.methods("ignored").empty());
}

TEST_CASE("files are found recursively in sorted order", "[corpus]")
{
  TempDir dir;
  write_text(dir / "b/z.py", "");
  write_text(dir / "a.py", "");
  write_text(dir / "b/a/y.py", "");
  auto files = collect_python_files(dir.path());
  REQUIRE(files.size() == 3);
  CHECK(std::is_sorted(files.begin(), files.end()));
}

TEST_CASE("worker count does not change the result", "[corpus]")
{
  TempDir dir;
  for (int i = 0; i < 40; ++i)
    write_text(dir / ("s" + std::to_string(i) + ".py"),
               "import lib" + std::to_string(i % 5) + " as l\nx = l.make()\nx.m" + std::to_string(i % 7) +
                   "()\nx.common()\n");
  CorpusOptions one;
  CorpusOptions eight;
  eight.jobs = 8;
  auto a = analyze_corpus(dir.path(), one);
  auto b = analyze_corpus(dir.path(), eight);
  CHECK(a == b);
  CHECK(usages_to_json(a).dump() == usages_to_json(b).dump());
  CHECK(a.files_analyzed == 40);
}

TEST_CASE("usages round-trip through json", "[corpus]")
{
  auto u = analyze_corpus(testing::fixture("running_example/corpus"));
  CHECK(usages_from_json(usages_to_json(u)) == u);
  CHECK_THROWS_AS(usages_from_json(json{{"records", {{{"path", "a"}, {"methods", {{"m", 0}}}}}}}), InputError);
  CHECK_THROWS_AS(usages_from_json(json::array()), InputError);
}

TEST_CASE("folding derived paths attributes calls to the root", "[corpus]")
{
  UsageMap u;
  u.observe("pandas.read_csv()", "dropna");
  u.observe("pandas.read_csv().dropna()", "head");
  u.observe("pandas", "read_csv");
  auto f = fold_derived(u);
  CHECK(f.methods("pandas.read_csv()") == std::set<std::string>{"dropna", "head"});
  CHECK(f.methods("pandas") == std::set<std::string>{"read_csv"});
  CHECK(f.records.size() == 2);
}

TEST_CASE("merging is a commutative monoid matching set union", "[corpus][property]")
{
  std::mt19937 rng(31);
  for (int i = 0; i < 1000; ++i) {
    auto a = oracles::random_usage_map(rng);
    auto b = oracles::random_usage_map(rng);
    auto c = oracles::random_usage_map(rng);
    REQUIRE(merge_usages(a, b) == merge_usages(b, a));
    REQUIRE(merge_usages(merge_usages(a, b), c) == merge_usages(a, merge_usages(b, c)));
    REQUIRE(merge_usages(a, UsageMap{}) == a);
    REQUIRE(oracles::method_sets(merge_usages(a, b)) == oracles::union_oracle(a, b));
  }
}
