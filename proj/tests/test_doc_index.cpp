#include <catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "support.hpp"
#include "typegen/doc_index.hpp"

using namespace typegen;
using testing::make_catalog;

namespace {

const char *kReadCsvDoc = R"(Read a comma-separated values (csv) file into DataFrame.

    Parameters
    ----------
    filepath_or_buffer : str
        Any valid string path is acceptable.

    Returns
    -------
    DataFrame or TextParser
        A comma-separated values (csv) file is returned as two-dimensional
        data structure with labeled axes.

    See Also
    --------
    DataFrame.to_csv : Write DataFrame to a comma-separated values (csv) file.
    )";

json catalog_with_functions(const std::vector<std::pair<std::string, std::string>> &functions,
                            const std::vector<std::string> &classes)
{
  json doc = {{"classes", json::array()}, {"functions", json::array()}};
  for (const auto &c : classes)
    doc["classes"].push_back({{"name", c}, {"methods", {"m"}}, {"bases", json::array()}});
  for (const auto &[name, docstring] : functions)
    doc["functions"].push_back({{"name", name}, {"docstring", docstring}, {"class", nullptr}});
  return doc;
}

} // namespace

TEST_CASE("numpydoc returns block is extracted without neighbouring sections", "[doc_index]")
{
  auto text = parse_returns_section(kReadCsvDoc);
  CHECK(text.find("DataFrame or TextParser") == 0);
  CHECK(text.find("labeled axes") != std::string::npos);
  CHECK(text.find("See Also") == std::string::npos);
  CHECK(text.find("to_csv") == std::string::npos);
  CHECK(text.find("filepath") == std::string::npos);
}

TEST_CASE("field-list conventions are extracted", "[doc_index]")
{
  CHECK(parse_returns_section("Do it.\n\n:param x: thing\n:returns: a Frame\n    spanning lines\n:raises: Err\n") ==
        "a Frame\nspanning lines");
  CHECK(parse_returns_section(":return: the value") == "the value");
  CHECK(parse_returns_section("Get.\n:rtype: bool\n") == "bool");
  CHECK(parse_returns_section(":Returns: Upper case marker") == "Upper case marker");
  CHECK(parse_returns_section(":returns: one\n:rtype: int") == "one\nint");
}

TEST_CASE("docstrings without a returns section yield nothing", "[doc_index]")
{
  CHECK(parse_returns_section("").empty());
  CHECK(parse_returns_section("Parameters\n----------\nx : int\n    The x.\n").empty());
  CHECK(parse_returns_section("Returns the DataFrame, sort of.").empty());
  CHECK(parse_returns_section("Returns\n-------\n").empty());
}

TEST_CASE("tokenizer keeps whole identifiers only", "[doc_index]")
{
  CHECK(tokenize("DataFrame or TextParser, 2D arrays (numpy.ndarray)") ==
        std::vector<std::string>{"dataframe", "or", "textparser", "arrays", "numpy", "ndarray"});
}

TEST_CASE("index postings point at documenting functions", "[doc_index]")
{
  auto cat = testing::running_example_catalog();
  auto index = build_index(cat);
  const auto *hits = index.lookup("dataframe");
  REQUIRE(hits != nullptr);
  CHECK(hits->contains(std::string_view("pandas.read_csv")));
  // empty docstrings are not indexed
  CHECK_FALSE(index.records().contains(std::string_view("pandas.core.frame.DataFrame.head")));
  for (const auto &[token, fns] : index.postings())
    for (const auto &fn : fns)
      CHECK(index.records().contains(fn));
}

TEST_CASE("an empty catalog gives an empty index", "[doc_index]")
{
  auto index = build_index(Catalog::from_json(json::object(), json::object()));
  CHECK(index.empty());
  CHECK(index.postings().empty());
}

TEST_CASE("postings match a linear scan on a small fixture", "[doc_index]")
{
  std::vector<std::pair<std::string, std::string>> fns = {
      {"m.f1", ":returns: a Series of values"},
      {"m.f2", ":returns: nothing useful"},
      {"m.f3", "Returns\n-------\nSeries\n"},
      {"m.f4", ":rtype: DataFrame"},
      {"m.f5", ":returns: SeriesGroupBy"}};
  auto cat = Catalog::from_json(catalog_with_functions(fns, {}), json::object());
  auto index = build_index(cat);
  REQUIRE(index.lookup("series") != nullptr);
  CHECK(to_strings(*index.lookup("series")) == std::vector<std::string>{"m.f1", "m.f3"});
}

TEST_CASE("doc inference finds catalog classes and vocabulary words", "[doc_index]")
{
  auto cat = testing::running_example_catalog();
  auto raw = infer_doc_types(build_index(cat), cat);
  auto &read_csv = raw.at(QualifiedName("pandas.read_csv"));
  CHECK(read_csv.contains(std::string_view("pandas.core.frame.DataFrame")));
  CHECK(read_csv.contains(std::string_view("pandas.io.parsers.readers.TextParser")));
  CHECK(read_csv.contains(std::string_view("pyspark.sql.dataframe.DataFrame")));

  auto bools = Catalog::from_json(catalog_with_functions({{"x.is_ok", ":rtype: bool"}, {"x.empty", ":returns:"}}, {}),
                                  json::object());
  auto got = infer_doc_types(build_index(bools), bools);
  CHECK(to_strings(got.at(QualifiedName("x.is_ok"))) == std::vector<std::string>{"bool"});
  CHECK_FALSE(got.contains(std::string_view("x.empty")));
}

TEST_CASE("short-name matching respects word boundaries", "[doc_index]")
{
  auto cat = Catalog::from_json(catalog_with_functions({{"lib.f", ":returns: a DataFrame"}}, {"lib.Frame"}),
                                json::object());
  auto raw = infer_doc_types(build_index(cat), cat);
  CHECK_FALSE(raw.contains(std::string_view("lib.f")));
}

TEST_CASE("cleansing prefers the function's own library", "[doc_index]")
{
  auto cat = make_catalog({{"pandas.core.frame.DataFrame", {"m"}, {}}, {"otherlib.DataFrame", {"m"}, {}}});
  auto out = cleanse_doc_candidates(QualifiedName("pandas.read_csv"),
                                    make_type_set({"pandas.core.frame.DataFrame", "otherlib.DataFrame"}), cat);
  CHECK(to_strings(out) == std::vector<std::string>{"pandas.core.frame.DataFrame"});
  // no same-library candidate: both stay
  auto other = cleanse_doc_candidates(QualifiedName("third.fn"),
                                      make_type_set({"pandas.core.frame.DataFrame", "otherlib.DataFrame"}), cat);
  CHECK(other.size() == 2);
}

TEST_CASE("builtins and primitives evict same-named user classes", "[doc_index]")
{
  auto cat = make_catalog({{"somelib.Dict", {"get"}, {}}, {"somelib.Other", {"get"}, {}}});
  CHECK(to_strings(cleanse_doc_candidates(QualifiedName("x.f"), make_type_set({"somelib.Dict", "dict"}), cat)) ==
        std::vector<std::string>{"dict"});
  CHECK(cleanse_doc_candidates(QualifiedName("x.f"), make_type_set({"somelib.Other", "dict"}), cat).size() == 2);
}

TEST_CASE("cleansing canonicalises aliases and drops unresolvable names", "[doc_index]")
{
  auto cat = testing::running_example_catalog();
  CHECK(to_strings(cleanse_doc_candidates(QualifiedName("pandas.read_csv"), make_type_set({"pandas.DataFrame"}), cat)) ==
        std::vector<std::string>{"pandas.core.frame.DataFrame"});
  CHECK(cleanse_doc_candidates(QualifiedName("pandas.read_csv"), make_type_set({"ghost.Type"}), cat).empty());
  TypeMap raw{{QualifiedName("a.f"), make_type_set({"ghost.Type"})}};
  CHECK(cleanse_doc_types(raw, cat).empty());
}

TEST_CASE("doc cleansing is idempotent and canonical on random candidate sets", "[doc_index][property]")
{
  json aliases = {{"aliases", json::array()}, {"invalid", {"alpha.mod.Bad"}}};
  std::vector<testing::ClassSpec> specs;
  std::vector<std::string> pool = {"int", "dict", "list", "bool", "None", "str", "ghost.Dict"};
  for (std::string lib : {"alpha", "beta", "gamma"})
    for (std::string cls : {"Dict", "List", "Frame", "Bool", "Thing", "Bad"}) {
      std::string name = lib + ".mod." + cls;
      specs.push_back({name, {"m"}, {}});
      pool.push_back(name);
      std::string alias = lib + "." + cls;
      aliases["aliases"].push_back({{"alias", alias}, {"canonical", name}});
      pool.push_back(alias);
    }
  auto cat = make_catalog(specs, aliases);
  std::mt19937 rng(1234);
  for (int i = 0; i < 1000; ++i) {
    TypeSet cands;
    int k = static_cast<int>(rng() % 7);
    for (int j = 0; j < k; ++j)
      cands.emplace(pool[rng() % pool.size()]);
    QualifiedName fn(std::vector<std::string>{"alpha.f", "beta.g", "zeta.h"}[rng() % 3]);
    auto once = cleanse_doc_candidates(fn, cands, cat);
    auto twice = cleanse_doc_candidates(fn, once, cat);
    REQUIRE(once == twice);
    for (const auto &t : once) {
      REQUIRE(cat.normalize(t) == std::optional<QualifiedName>(t));
      REQUIRE_FALSE(cat.alias_map().invalid.contains(t.str()));
    }
  }
}

TEST_CASE("doc inference equals a brute-force double loop on 200 random functions", "[doc_index][oracle]")
{
  for (unsigned seed : {2024u, 7u, 99u}) {
    auto fx = oracles::random_doc_fixture(seed, 200);
    auto cat = Catalog::from_json(fx.catalog, json::object());
    std::map<std::string, std::set<std::string>> actual;
    for (const auto &[fn, types] : infer_doc_types(build_index(cat), cat))
      for (const auto &t : types)
        actual[fn.str()].insert(t.str());
    CHECK(actual == oracles::brute_force_doc_types(fx, cat.vocabulary()));
  }
}
