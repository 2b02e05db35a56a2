#include <catch_amalgamated.hpp>

#include "support.hpp"
#include "typegen/frontend.hpp"
#include "typegen/turtle_analysis.hpp"

using namespace typegen;

namespace {

UsageMap usages_of(const std::string &src, AnalysisOptions opts = {})
{
  return analyze_script(parse_script(src, "test.py"), opts);
}

using Records = std::map<std::string, MethodCounts, std::less<>>;

} // namespace

TEST_CASE("running example yields one path per chained call", "[turtle]")
{
  auto u = usages_of(read_file(testing::fixture("running_example/corpus/script1.py")));
  Records expected{{"pandas", {{"read_csv", 1}}},
                   {"pandas.read_csv()", {{"dropna", 1}}},
                   {"pandas.read_csv().dropna()", {{"drop", 1}}},
                   {"pandas.read_csv().dropna().drop()", {{"head", 1}}}};
  CHECK(u.records == expected);
  CHECK(u.files_analyzed == 1);
  CHECK(u.files_truncated == 0);
}

TEST_CASE("parameters receive turtles from every call site", "[turtle]")
{
  auto script = parse_script(read_file(testing::fixture("running_example/corpus/script1.py")), "s.py");
  auto r = analyze_script_detailed(script, {});
  const auto &param = r.values.at(1).at(script.functions[1].params[0]);
  REQUIRE(param.turtles.size() == 1);
  CHECK(r.turtle(*param.turtles.begin()).provenance == "pandas.read_csv()");
  REQUIRE(r.trace.size() == 1);
  CHECK(r.trace[0].find("bind data") != std::string::npos);
}

TEST_CASE("an import alone records nothing", "[turtle]")
{
  CHECK(usages_of("import os\n").records.empty());
  CHECK(usages_of("x = 1\ny = x + 2\n").records.empty());
}

TEST_CASE("each call creates a fresh turtle", "[turtle]")
{
  auto script = parse_script("import pandas as pd\na = pd.read_csv('x')\nb = pd.read_csv('y')\na.head()\nb.tail()\n",
                             "t.py");
  auto r = analyze_script_detailed(script, {});
  Records expected{{"pandas", {{"read_csv", 2}}}, {"pandas.read_csv()", {{"head", 1}, {"tail", 1}}}};
  CHECK(r.usages.records == expected);
  int read_csv_turtles = 0;
  for (const auto &t : r.turtles)
    read_csv_turtles += t.provenance == "pandas.read_csv()";
  CHECK(read_csv_turtles == 2);
}

TEST_CASE("property reads are field-insensitive", "[turtle]")
{
  auto u = usages_of("import pandas as pd\ndf = pd.DataFrame()\nv = df.values\nv.sum()\ndf.shape[0].bit_length()\n");
  CHECK(u.methods("pandas.DataFrame()") == std::set<std::string>{"bit_length", "sum"});
}

TEST_CASE("phis union turtles from both branches", "[turtle]")
{
  auto u = usages_of("import a\nif c:\n    x = a.f()\nelse:\n    x = a.g()\nx.h()\n");
  CHECK(u.methods("a.f()") == std::set<std::string>{"h"});
  CHECK(u.methods("a.g()") == std::set<std::string>{"h"});
}

TEST_CASE("builtin calls pass their argument turtles through", "[turtle]")
{
  auto u = usages_of("import a\nx = list(a.items())\nx.pop()\n");
  CHECK(u.methods("a.items()") == std::set<std::string>{"pop"});
}

TEST_CASE("return values flow back to the caller", "[turtle]")
{
  auto u = usages_of("import requests\ndef get(url):\n    return requests.get(url)\nr = get('u')\nr.json()\n");
  CHECK(u.methods("requests") == std::set<std::string>{"get"});
  CHECK(u.methods("requests.get()") == std::set<std::string>{"json"});
}

TEST_CASE("keyword arguments bind by name", "[turtle]")
{
  auto u = usages_of("import db\ndef use(a, b):\n    b.commit()\nuse(b=db.connect(), a=1)\n");
  CHECK(u.methods("db.connect()") == std::set<std::string>{"commit"});
}

TEST_CASE("recursive and looping code reaches a fixpoint", "[turtle]")
{
  auto u = usages_of("import pandas as pd\n"
                     "def walk(df, n):\n"
                     "    if n:\n"
                     "        return walk(df.dropna(), n - 1)\n"
                     "    return df\n"
                     "d = pd.read_csv('x')\n"
                     "for i in range(3):\n"
                     "    d = d.ffill()\n"
                     "walk(d, 3).head()\n");
  CHECK(u.files_truncated == 0);
  CHECK(u.methods("pandas.read_csv()").contains("ffill"));
  CHECK(u.methods("pandas.read_csv()").contains("dropna"));
  CHECK(u.methods("pandas.read_csv()").contains("head"));
}

TEST_CASE("nested functions see enclosing turtles", "[turtle]")
{
  auto u = usages_of("import pandas as pd\ndf = pd.read_csv('x')\ndef show():\n    df.plot()\nshow()\n");
  CHECK(u.methods("pandas.read_csv()") == std::set<std::string>{"plot"});
}

TEST_CASE("subscripts and iteration count as a bare call marker", "[turtle]")
{
  auto u = usages_of("import pandas as pd\ndf = pd.read_csv('x')\ndf['a'].mean()\n");
  CHECK(u.methods("pandas.read_csv()").contains("mean"));
}

TEST_CASE("exhausting the budget truncates the file", "[turtle]")
{
  std::string src = "import pandas as pd\n";
  for (int i = 0; i < 50; ++i)
    src += "def f" + std::to_string(i) + "(x):\n    return x.m" + std::to_string(i) + "()\n";
  for (int i = 0; i < 50; ++i)
    src += "f" + std::to_string(i) + "(pd.read_csv('x'))\n";
  AnalysisOptions tiny;
  tiny.instruction_budget = 5;
  auto script = parse_script(src, "big.py");
  auto r = analyze_script_detailed(script, tiny);
  CHECK(r.truncated);
  CHECK(r.usages.files_truncated == 1);
  auto full = analyze_script_detailed(script, {});
  CHECK_FALSE(full.truncated);
  CHECK(full.usages.methods("pandas.read_csv()").size() == 50);
  CHECK(dump_analysis(script, r).find("truncated after") != std::string::npos);
}

TEST_CASE("analysis output is deterministic", "[turtle]")
{
  auto script = parse_script(read_file(testing::fixture("running_example/corpus/script1.py")), "s.py");
  CHECK(dump_analysis(script, analyze_script_detailed(script, {})) ==
        dump_analysis(script, analyze_script_detailed(script, {})));
}

TEST_CASE("combinatorial call chains stop at the work budget", "[turtle]")
{
  // every subset order of the branch calls is a distinct provenance
  std::string src = "import lib\nx = lib.a()\nfor i in r:\n";
  for (int k = 0; k < 12; ++k)
    src += "    if c" + std::to_string(k) + ":\n        x = x.m" + std::to_string(k) + "()\n";
  src += "    x.use()\n";
  auto script = parse_script(src, "explode.py");
  AnalysisOptions opts;
  opts.work_budget = 50000;
  auto r = analyze_script_detailed(script, opts);
  CHECK(r.truncated);
  CHECK(r.usages.files_truncated == 1);
  CHECK(r.turtles.size() < 100000);
  // observations made before the cut are kept
  CHECK(r.usages.methods("lib").contains("a"));
  CHECK(r.usages.methods("lib.a()").contains("m0"));
}
