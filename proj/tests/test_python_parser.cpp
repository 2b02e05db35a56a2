#include <catch_amalgamated.hpp>

#include "typegen/python_parser.hpp"

using namespace typegen::python;

namespace {

std::vector<TokenKind> kinds(std::string_view src)
{
  std::vector<TokenKind> out;
  for (const auto &t : tokenize_python(src))
    out.push_back(t.kind);
  return out;
}

} // namespace

TEST_CASE("lexer emits indentation tokens", "[lexer]")
{
  using K = TokenKind;
  CHECK(kinds("if x:\n    y\nz\n") ==
        std::vector<K>{K::Name, K::Name, K::Op, K::Newline, K::Indent, K::Name, K::Newline, K::Dedent, K::Name,
                       K::Newline, K::End});
}

TEST_CASE("lexer skips comments, blank lines and bracketed newlines", "[lexer]")
{
  using K = TokenKind;
  CHECK(kinds("# c\n\nf(a,\n  b)  # trailing\n") ==
        std::vector<K>{K::Name, K::Op, K::Name, K::Op, K::Name, K::Op, K::Newline, K::End});
  CHECK(kinds("x = 1 + \\\n  2\n").size() == 7);
}

TEST_CASE("lexer handles string prefixes and triple quotes", "[lexer]")
{
  auto toks = tokenize_python("a = b'x'\nc = f\"{y}\"\nd = '''multi\nline'''\ne = r'\\d'\n");
  std::vector<Token> strings;
  for (const auto &t : toks)
    if (t.kind == TokenKind::String)
      strings.push_back(t);
  REQUIRE(strings.size() == 4);
  CHECK(strings[0].bytes);
  CHECK(strings[1].formatted);
  CHECK_FALSE(strings[2].bytes);
  CHECK(toks.back().kind == TokenKind::End);
}

TEST_CASE("lexer reports inconsistent dedent and unterminated strings", "[lexer]")
{
  CHECK_THROWS_AS(tokenize_python("if x:\n    a\n  b\n"), SyntaxError);
  CHECK_THROWS_AS(tokenize_python("s = 'open\n"), SyntaxError);
  CHECK_THROWS_AS(tokenize_python("s = '''never closed\n"), SyntaxError);
}

TEST_CASE("parser builds the statement shapes the lowering relies on", "[parser]")
{
  auto m = parse_python("import pandas as pd, os.path\n"
                        "from a.b import c as d, e\n"
                        "def f(x, *args, y=1, **kw):\n"
                        "    return x.g(y)[0]\n"
                        "a = b = f(1, k=2, *s, **t)\n");
  REQUIRE(m.body.size() == 4);
  const auto &imp = *m.body[0];
  CHECK(imp.kind == StmtKind::Import);
  REQUIRE(imp.names.size() == 2);
  CHECK(imp.names[0].name == "pandas");
  CHECK(imp.names[0].asname == "pd");
  CHECK(imp.names[1].name == "os.path");

  const auto &from = *m.body[1];
  CHECK(from.kind == StmtKind::ImportFrom);
  CHECK(from.name == "a.b");
  CHECK(from.level == 0);
  CHECK(from.names[0].asname == "d");

  const auto &def = *m.body[2];
  CHECK(def.kind == StmtKind::FunctionDef);
  CHECK(def.name == "f");
  REQUIRE(def.params.size() == 4);
  CHECK(def.params[1].kind == ParamKind::VarPositional);
  CHECK(def.params[2].kind == ParamKind::KeywordOnly);
  CHECK(def.params[2].default_value != nullptr);
  CHECK(def.params[3].kind == ParamKind::VarKeyword);
  const auto &ret = *def.body[0];
  CHECK(ret.kind == StmtKind::Return);
  CHECK(ret.value->kind == ExprKind::Subscript);
  CHECK(ret.value->children[0]->kind == ExprKind::Call);

  const auto &assign = *m.body[3];
  CHECK(assign.kind == StmtKind::Assign);
  CHECK(assign.targets.size() == 2);
  const auto &call = *assign.value;
  REQUIRE(call.args.size() == 4);
  CHECK(call.args[1].keyword == "k");
  CHECK(call.args[2].star);
  CHECK(call.args[3].double_star);
}

TEST_CASE("parser accepts common modern syntax", "[parser]")
{
  const char *src = R"(
@decorator(arg)
class C(Base, metaclass=M):
    x: int = 3
    async def run(self):
        async with a as b:
            await b
        return [i async for i in g()]

def g(a, /, b, *, c):
    if (n := len(a)) > 2:
        yield from a
    lam = lambda q, *r: q
    s = {**d, 'k': 1}
    t = x if y else z
    u = a[1:2, ::3]
    v = not a and b or c
    w = -a ** 2 @ m
    return f"{a!r:>{b}}", *s

try:
    pass
except (A, B) as e:
    raise X from e
except* C:
    pass
else:
    pass
finally:
    del a, b[0]

with open(p) as f, open(q):
    for i, (j, k) in enumerate(f):
        while True:
            break
        else:
            continue

match = 3
global_var = [x for x in range(3) if x for y in x]
print(*args, sep='')
)";
  Module m;
  REQUIRE_NOTHROW(m = parse_python(src));
  CHECK(m.body.size() == 7);
}

TEST_CASE("parser rejects python 2 print statements with a line", "[parser]")
{
  try {
    parse_python("x = 1\nprint 'hello'\n");
    FAIL("expected a syntax error");
  } catch (const SyntaxError &e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("parser rejects malformed input", "[parser]")
{
  CHECK_THROWS_AS(parse_python("def f(:\n  pass\n"), SyntaxError);
  CHECK_THROWS_AS(parse_python("x = (1, 2\n"), SyntaxError);
  CHECK_THROWS_AS(parse_python("if x\n  y\n"), SyntaxError);
  CHECK_THROWS_AS(parse_python("exec 'code'\n"), SyntaxError);
}

TEST_CASE("empty and comment-only sources parse to empty modules", "[parser]")
{
  CHECK(parse_python("").body.empty());
  CHECK(parse_python("# nothing\n\n").body.empty());
}

TEST_CASE("with statements take one target per item", "[parser]")
{
  auto m = parse_python("with a() as s, s.dup() as (t, u), c:\n    pass\n");
  REQUIRE(m.body.size() == 1);
  const auto &w = *m.body[0];
  CHECK(w.kind == StmtKind::With);
  REQUIRE(w.exprs.size() == 3);
  CHECK(w.targets[0]->kind == ExprKind::Name);
  CHECK(w.targets[1]->kind == ExprKind::Display);
  CHECK(w.targets[2] == nullptr);
}
