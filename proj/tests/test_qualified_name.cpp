#include <catch_amalgamated.hpp>

#include "typegen/qualified_name.hpp"

using typegen::QualifiedName;

TEST_CASE("qualified names split into segments", "[qualified_name]")
{
  QualifiedName q("pandas.core.frame.DataFrame");
  CHECK(q.str() == "pandas.core.frame.DataFrame");
  CHECK(q.short_name() == "DataFrame");
  CHECK(q.library() == "pandas");
  CHECK(q.segments().size() == 4);
}

TEST_CASE("single-segment names are their own library and short name", "[qualified_name]")
{
  QualifiedName q("int");
  CHECK(q.short_name() == "int");
  CHECK(q.library() == "int");
  CHECK(q.segments().size() == 1);
}

TEST_CASE("malformed names are rejected", "[qualified_name]")
{
  for (const char *bad : {"", ".", "a.", ".a", "a..b", "a b", "a.\tb"}) {
    INFO(bad);
    CHECK_FALSE(QualifiedName::valid(bad));
    CHECK_FALSE(QualifiedName::parse(bad).has_value());
    CHECK_THROWS_AS(QualifiedName(bad), typegen::InputError);
  }
}

TEST_CASE("provenance-style names with call markers are accepted", "[qualified_name]")
{
  CHECK(QualifiedName::valid("pandas.read_csv().dropna"));
}

TEST_CASE("ordering is lexicographic and sets probe by string", "[qualified_name]")
{
  auto s = typegen::make_type_set({"b.B", "a.A", "a.B"});
  CHECK(typegen::to_strings(s) == std::vector<std::string>{"a.A", "a.B", "b.B"});
  CHECK(s.contains(std::string_view("a.B")));
  CHECK_FALSE(s.contains(std::string_view("c")));
}
