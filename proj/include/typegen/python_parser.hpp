#pragma once

#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "typegen/python_ast.hpp"
#include "typegen/python_lexer.hpp"

namespace typegen::python {

/// Recursive-descent parser for Python 3 source. Class bodies and `match`
/// statements are recognised and skipped token-wise; everything else is
/// parsed into the AST of python_ast.hpp.
class Parser {
public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Module parse_module()
  {
    Module mod;
    while (!at(TokenKind::End)) {
      if (at(TokenKind::Newline)) {
        ++pos_;
        continue;
      }
      if (at(TokenKind::Indent))
        fail("unexpected indent");
      parse_statement(mod.body);
    }
    return mod;
  }

private:
  // -------------------------------------------------------------------------
  // Token helpers
  // -------------------------------------------------------------------------

  static bool is_keyword(std::string_view w)
  {
    static const std::set<std::string_view> kw = {
        "False", "None",   "True",    "and",      "as",     "assert", "async",
        "await", "break",  "class",   "continue", "def",    "del",    "elif",
        "else",  "except", "finally", "for",      "from",   "global", "if",
        "import", "in",    "is",      "lambda",   "nonlocal", "not",  "or",
        "pass",  "raise",  "return",  "try",      "while",  "with",   "yield"};
    return kw.contains(w);
  }

  const Token &cur() const { return toks_[pos_]; }
  const Token &ahead(std::size_t n) const
  {
    return toks_[std::min(pos_ + n, toks_.size() - 1)];
  }
  bool at(TokenKind k) const { return cur().kind == k; }
  bool at_op(std::string_view op) const { return cur().kind == TokenKind::Op && cur().text == op; }
  bool at_kw(std::string_view kw) const { return cur().kind == TokenKind::Name && cur().text == kw; }
  bool at_plain_name() const { return cur().kind == TokenKind::Name && !is_keyword(cur().text); }

  [[noreturn]] void fail(const std::string &msg) const { throw SyntaxError(cur().line, msg); }

  void expect_op(std::string_view op)
  {
    if (!at_op(op))
      fail("expected '" + std::string(op) + "' but found '" + describe(cur()) + "'");
    ++pos_;
  }
  void expect_kw(std::string_view kw)
  {
    if (!at_kw(kw))
      fail("expected '" + std::string(kw) + "' but found '" + describe(cur()) + "'");
    ++pos_;
  }
  std::string expect_name()
  {
    if (!at_plain_name())
      fail("expected a name but found '" + describe(cur()) + "'");
    return toks_[pos_++].text;
  }
  bool accept_op(std::string_view op)
  {
    if (at_op(op)) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool accept_kw(std::string_view kw)
  {
    if (at_kw(kw)) {
      ++pos_;
      return true;
    }
    return false;
  }

  static std::string describe(const Token &t)
  {
    switch (t.kind) {
    case TokenKind::Newline: return "NEWLINE";
    case TokenKind::Indent: return "INDENT";
    case TokenKind::Dedent: return "DEDENT";
    case TokenKind::End: return "EOF";
    case TokenKind::String: return "string";
    default: return t.text;
    }
  }

  ExprPtr make(ExprKind kind, int line, std::string name = {})
  {
    auto e = std::make_unique<Expr>();
    e->kind = kind;
    e->line = line;
    e->name = std::move(name);
    return e;
  }

  StmtPtr make_stmt(StmtKind kind, int line)
  {
    auto s = std::make_unique<Stmt>();
    s->kind = kind;
    s->line = line;
    return s;
  }

  /// True when the current token can begin an expression.
  bool at_expr_start() const
  {
    const auto &t = cur();
    switch (t.kind) {
    case TokenKind::Name:
      return !is_keyword(t.text) || t.text == "None" || t.text == "True" || t.text == "False" ||
             t.text == "not" || t.text == "lambda" || t.text == "await" || t.text == "yield";
    case TokenKind::Number:
    case TokenKind::String: return true;
    case TokenKind::Op:
      return t.text == "(" || t.text == "[" || t.text == "{" || t.text == "-" || t.text == "+" ||
             t.text == "~" || t.text == "..." || t.text == "*";
    default: return false;
    }
  }

  // -------------------------------------------------------------------------
  // Statements
  // -------------------------------------------------------------------------

  void parse_statement(Body &out)
  {
    if (at_kw("if"))
      return out.push_back(parse_if());
    if (at_kw("while"))
      return out.push_back(parse_while());
    if (at_kw("for"))
      return out.push_back(parse_for());
    if (at_kw("try"))
      return out.push_back(parse_try());
    if (at_kw("with"))
      return out.push_back(parse_with());
    if (at_kw("def"))
      return out.push_back(parse_def({}));
    if (at_kw("class"))
      return out.push_back(parse_class({}));
    if (at_op("@"))
      return out.push_back(parse_decorated());
    if (at_kw("async") && ahead(1).kind == TokenKind::Name &&
        (ahead(1).text == "def" || ahead(1).text == "for" || ahead(1).text == "with")) {
      ++pos_;
      return parse_statement(out);
    }
    if (looks_like_match())
      return out.push_back(skip_match());
    parse_simple_statements(out);
  }

  Body parse_block()
  {
    expect_op(":");
    Body body;
    if (at(TokenKind::Newline)) {
      ++pos_;
      if (!at(TokenKind::Indent))
        fail("expected an indented block");
      ++pos_;
      while (!at(TokenKind::Dedent) && !at(TokenKind::End))
        parse_statement(body);
      if (at(TokenKind::Dedent))
        ++pos_;
    } else {
      parse_simple_statements(body);
    }
    return body;
  }

  /// Consumes a block without building AST for it.
  void skip_block()
  {
    expect_op(":");
    if (!at(TokenKind::Newline)) {
      while (!at(TokenKind::Newline) && !at(TokenKind::End))
        ++pos_;
      if (at(TokenKind::Newline))
        ++pos_;
      return;
    }
    ++pos_;
    if (!at(TokenKind::Indent))
      fail("expected an indented block");
    ++pos_;
    int depth = 1;
    while (depth > 0 && !at(TokenKind::End)) {
      if (at(TokenKind::Indent))
        ++depth;
      else if (at(TokenKind::Dedent))
        --depth;
      ++pos_;
    }
  }

  bool looks_like_match() const
  {
    if (!(cur().kind == TokenKind::Name && cur().text == "match"))
      return false;
    const auto &next = ahead(1);
    if (next.kind == TokenKind::Newline ||
        (next.kind == TokenKind::Op && (next.text == "=" || next.text == "." ||
                                        next.text == ":" || next.text == ",")))
      return false;
    std::size_t i = pos_;
    while (i < toks_.size() && toks_[i].kind != TokenKind::Newline && toks_[i].kind != TokenKind::End)
      ++i;
    if (i >= toks_.size() || toks_[i].kind != TokenKind::Newline || i == pos_)
      return false;
    const auto &last = toks_[i - 1];
    return last.kind == TokenKind::Op && last.text == ":" && i + 1 < toks_.size() &&
           toks_[i + 1].kind == TokenKind::Indent;
  }

  StmtPtr skip_match()
  {
    auto s = make_stmt(StmtKind::Skipped, cur().line);
    s->name = "match";
    while (!at(TokenKind::Newline))
      ++pos_;
    --pos_; // back onto the ':'
    skip_block();
    return s;
  }

  StmtPtr parse_if()
  {
    auto s = make_stmt(StmtKind::If, cur().line);
    ++pos_; // if / elif
    s->value = parse_namedexpr_test();
    s->body = parse_block();
    if (at_kw("elif")) {
      s->orelse.push_back(parse_if());
    } else if (accept_kw("else")) {
      s->orelse = parse_block();
    }
    return s;
  }

  StmtPtr parse_while()
  {
    auto s = make_stmt(StmtKind::While, cur().line);
    expect_kw("while");
    s->value = parse_namedexpr_test();
    s->body = parse_block();
    if (accept_kw("else"))
      s->orelse = parse_block();
    return s;
  }

  StmtPtr parse_for()
  {
    auto s = make_stmt(StmtKind::For, cur().line);
    expect_kw("for");
    s->targets.push_back(parse_exprlist());
    expect_kw("in");
    s->value = parse_testlist_star_expr();
    s->body = parse_block();
    if (accept_kw("else"))
      s->orelse = parse_block();
    return s;
  }

  StmtPtr parse_try()
  {
    auto s = make_stmt(StmtKind::Try, cur().line);
    expect_kw("try");
    s->body = parse_block();
    while (at_kw("except")) {
      ++pos_;
      accept_op("*");
      Handler h;
      if (!at_op(":")) {
        h.type = parse_test();
        if (accept_kw("as"))
          h.name = expect_name();
        else if (accept_op(","))
          parse_test(); // legacy form; rejected by Python 3 but harmless here
      }
      h.body = parse_block();
      s->handlers.push_back(std::move(h));
    }
    if (accept_kw("else"))
      s->orelse = parse_block();
    if (accept_kw("finally"))
      s->finalbody = parse_block();
    if (s->handlers.empty() && s->finalbody.empty())
      fail("try statement needs except or finally");
    return s;
  }

  void parse_with_item(Stmt &s)
  {
    s.exprs.push_back(parse_test());
    // a single target: `with a as x, b as y` lists two items
    if (accept_kw("as"))
      s.targets.push_back(parse_expr());
    else
      s.targets.push_back(nullptr);
  }

  StmtPtr parse_with()
  {
    auto s = make_stmt(StmtKind::With, cur().line);
    expect_kw("with");
    if (at_op("(")) {
      auto save = pos_;
      try {
        ++pos_;
        do {
          if (at_op(")"))
            break;
          parse_with_item(*s);
        } while (accept_op(","));
        expect_op(")");
        if (!at_op(":"))
          fail("not a parenthesized with");
      } catch (const SyntaxError &) {
        pos_ = save;
        s->exprs.clear();
        s->targets.clear();
        do {
          parse_with_item(*s);
        } while (accept_op(","));
      }
    } else {
      do {
        parse_with_item(*s);
      } while (accept_op(","));
    }
    s->body = parse_block();
    return s;
  }

  StmtPtr parse_decorated()
  {
    std::vector<ExprPtr> decorators;
    while (accept_op("@")) {
      decorators.push_back(parse_namedexpr_test());
      if (!at(TokenKind::Newline))
        fail("expected newline after decorator");
      ++pos_;
    }
    accept_kw("async");
    if (at_kw("def"))
      return parse_def(std::move(decorators));
    if (at_kw("class"))
      return parse_class(std::move(decorators));
    fail("expected def or class after decorator");
  }

  std::vector<Param> parse_params(std::string_view closer, bool annotations)
  {
    std::vector<Param> params;
    bool keyword_only = false;
    while (!at_op(closer)) {
      Param p;
      if (accept_op("/")) {
        if (!accept_op(","))
          break;
        continue;
      }
      if (accept_op("**")) {
        p.kind = ParamKind::VarKeyword;
        p.name = expect_name();
      } else if (accept_op("*")) {
        keyword_only = true;
        if (at_op(",") || at_op(closer)) {
          if (!accept_op(","))
            break;
          continue;
        }
        p.kind = ParamKind::VarPositional;
        p.name = expect_name();
      } else {
        p.kind = keyword_only ? ParamKind::KeywordOnly : ParamKind::Positional;
        p.name = expect_name();
      }
      if (annotations && accept_op(":"))
        parse_test();
      if (accept_op("="))
        p.default_value = parse_test();
      params.push_back(std::move(p));
      if (!accept_op(","))
        break;
    }
    return params;
  }

  StmtPtr parse_def(std::vector<ExprPtr> decorators)
  {
    auto s = make_stmt(StmtKind::FunctionDef, cur().line);
    expect_kw("def");
    s->name = expect_name();
    if (at_op("["))
      skip_type_params();
    expect_op("(");
    s->params = parse_params(")", true);
    expect_op(")");
    if (accept_op("->"))
      parse_test();
    s->decorators = std::move(decorators);
    s->body = parse_block();
    return s;
  }

  void skip_type_params()
  {
    int depth = 0;
    do {
      if (at_op("["))
        ++depth;
      else if (at_op("]"))
        --depth;
      ++pos_;
    } while (depth > 0 && !at(TokenKind::End));
  }

  StmtPtr parse_class(std::vector<ExprPtr> decorators)
  {
    auto s = make_stmt(StmtKind::ClassDef, cur().line);
    expect_kw("class");
    s->name = expect_name();
    if (at_op("["))
      skip_type_params();
    if (accept_op("(")) {
      auto args = parse_arglist(")");
      for (auto &a : args)
        s->exprs.push_back(std::move(a.value));
      expect_op(")");
    }
    s->decorators = std::move(decorators);
    skip_block();
    return s;
  }

  void parse_simple_statements(Body &out)
  {
    while (true) {
      out.push_back(parse_small_statement());
      if (!accept_op(";"))
        break;
      if (at(TokenKind::Newline) || at(TokenKind::End))
        break;
    }
    if (at(TokenKind::End))
      return;
    if (!at(TokenKind::Newline))
      fail("invalid syntax near '" + describe(cur()) + "'");
    ++pos_;
  }

  StmtPtr parse_small_statement()
  {
    int line = cur().line;
    if (accept_kw("pass"))
      return make_stmt(StmtKind::Pass, line);
    if (accept_kw("break"))
      return make_stmt(StmtKind::Break, line);
    if (accept_kw("continue"))
      return make_stmt(StmtKind::Continue, line);
    if (accept_kw("return")) {
      auto s = make_stmt(StmtKind::Return, line);
      if (at_expr_start())
        s->value = parse_testlist_star_expr();
      return s;
    }
    if (accept_kw("raise")) {
      auto s = make_stmt(StmtKind::Raise, line);
      if (at_expr_start()) {
        s->value = parse_test();
        if (accept_kw("from"))
          s->exprs.push_back(parse_test());
      }
      return s;
    }
    if (at_kw("global") || at_kw("nonlocal")) {
      auto s = make_stmt(at_kw("global") ? StmtKind::Global : StmtKind::Nonlocal, line);
      ++pos_;
      do {
        s->identifiers.push_back(expect_name());
      } while (accept_op(","));
      return s;
    }
    if (accept_kw("del")) {
      auto s = make_stmt(StmtKind::Del, line);
      s->exprs.push_back(parse_exprlist());
      return s;
    }
    if (accept_kw("assert")) {
      auto s = make_stmt(StmtKind::Assert, line);
      s->exprs.push_back(parse_test());
      if (accept_op(","))
        s->exprs.push_back(parse_test());
      return s;
    }
    if (at_kw("import"))
      return parse_import();
    if (at_kw("from"))
      return parse_from_import();
    if (cur().kind == TokenKind::Name && cur().text == "type" && ahead(1).kind == TokenKind::Name &&
        !is_keyword(ahead(1).text) &&
        (ahead(2).kind == TokenKind::Op && (ahead(2).text == "=" || ahead(2).text == "["))) {
      auto s = make_stmt(StmtKind::Skipped, line);
      s->name = "type_alias";
      while (!at(TokenKind::Newline) && !at(TokenKind::End) && !at_op(";"))
        ++pos_;
      return s;
    }
    return parse_expr_statement();
  }

  std::string parse_dotted_name()
  {
    std::string name = expect_name();
    while (accept_op(".")) {
      name += '.';
      name += expect_name();
    }
    return name;
  }

  StmtPtr parse_import()
  {
    auto s = make_stmt(StmtKind::Import, cur().line);
    expect_kw("import");
    do {
      ImportAlias a;
      a.name = parse_dotted_name();
      if (accept_kw("as"))
        a.asname = expect_name();
      s->names.push_back(std::move(a));
    } while (accept_op(","));
    return s;
  }

  StmtPtr parse_from_import()
  {
    auto s = make_stmt(StmtKind::ImportFrom, cur().line);
    expect_kw("from");
    while (at_op(".") || at_op("...")) {
      s->level += static_cast<int>(cur().text.size());
      ++pos_;
    }
    if (!at_kw("import"))
      s->name = parse_dotted_name();
    else if (s->level == 0)
      fail("expected module name");
    expect_kw("import");
    if (accept_op("*")) {
      s->names.push_back({"*", ""});
      return s;
    }
    bool paren = accept_op("(");
    do {
      if (paren && at_op(")"))
        break;
      ImportAlias a;
      a.name = expect_name();
      if (accept_kw("as"))
        a.asname = expect_name();
      s->names.push_back(std::move(a));
    } while (accept_op(","));
    if (paren)
      expect_op(")");
    return s;
  }

  static bool is_augassign(const Token &t)
  {
    static const std::set<std::string_view> ops = {"+=", "-=",  "*=",  "/=",  "//=", "%=", "**=",
                                                   ">>=", "<<=", "&=", "|=", "^=",  "@="};
    return t.kind == TokenKind::Op && ops.contains(t.text);
  }

  ExprPtr parse_yield_or_testlist()
  {
    if (at_kw("yield"))
      return parse_yield();
    return parse_testlist_star_expr();
  }

  StmtPtr parse_expr_statement()
  {
    int line = cur().line;
    if (!at_expr_start())
      fail("invalid syntax near '" + describe(cur()) + "'");
    auto lhs = parse_yield_or_testlist();
    if (at_op(":")) {
      ++pos_;
      auto s = make_stmt(StmtKind::AnnAssign, line);
      parse_test();
      s->targets.push_back(std::move(lhs));
      if (accept_op("="))
        s->value = parse_yield_or_testlist();
      return s;
    }
    if (is_augassign(cur())) {
      auto s = make_stmt(StmtKind::AugAssign, line);
      s->name = cur().text;
      ++pos_;
      s->targets.push_back(std::move(lhs));
      s->value = parse_yield_or_testlist();
      return s;
    }
    if (at_op("=")) {
      auto s = make_stmt(StmtKind::Assign, line);
      std::vector<ExprPtr> chain;
      chain.push_back(std::move(lhs));
      while (accept_op("="))
        chain.push_back(parse_yield_or_testlist());
      s->value = std::move(chain.back());
      chain.pop_back();
      s->targets = std::move(chain);
      return s;
    }
    auto s = make_stmt(StmtKind::Expr, line);
    s->value = std::move(lhs);
    return s;
  }

  // -------------------------------------------------------------------------
  // Expressions
  // -------------------------------------------------------------------------

  ExprPtr parse_yield()
  {
    auto e = make(ExprKind::Yield, cur().line);
    expect_kw("yield");
    if (accept_kw("from")) {
      e->name = "from";
      e->children.push_back(parse_test());
    } else if (at_expr_start()) {
      e->children.push_back(parse_testlist_star_expr());
    }
    return e;
  }

  ExprPtr tuple_of(std::vector<ExprPtr> items, int line)
  {
    auto t = make(ExprKind::Display, line, "tuple");
    t->children = std::move(items);
    return t;
  }

  /// test_or_star (',' test_or_star)* [','] -> single expr or tuple
  ExprPtr parse_testlist_star_expr()
  {
    int line = cur().line;
    std::vector<ExprPtr> items;
    bool comma = false;
    items.push_back(parse_test_or_star());
    while (at_op(",")) {
      ++pos_;
      comma = true;
      if (!at_expr_start())
        break;
      items.push_back(parse_test_or_star());
    }
    if (!comma)
      return std::move(items.front());
    return tuple_of(std::move(items), line);
  }

  ExprPtr parse_test_or_star()
  {
    if (at_op("*"))
      return parse_star_expr();
    return parse_namedexpr_test();
  }

  ExprPtr parse_star_expr()
  {
    auto e = make(ExprKind::Starred, cur().line);
    expect_op("*");
    e->children.push_back(parse_expr());
    return e;
  }

  /// Targets of `for` and `del`: bitwise-or level so `in` is not consumed.
  ExprPtr parse_exprlist()
  {
    int line = cur().line;
    std::vector<ExprPtr> items;
    bool comma = false;
    items.push_back(at_op("*") ? parse_star_expr() : parse_expr());
    while (at_op(",")) {
      ++pos_;
      comma = true;
      if (!(at_expr_start() && !at_kw("in")))
        break;
      items.push_back(at_op("*") ? parse_star_expr() : parse_expr());
    }
    if (!comma)
      return std::move(items.front());
    return tuple_of(std::move(items), line);
  }

  ExprPtr parse_target_expr() { return parse_exprlist(); }

  ExprPtr parse_namedexpr_test()
  {
    auto e = parse_test();
    if (at_op(":=")) {
      if (e->kind != ExprKind::Name)
        fail("cannot use assignment expression here");
      ++pos_;
      auto n = make(ExprKind::NamedExpr, e->line, e->name);
      n->children.push_back(parse_test());
      return n;
    }
    return e;
  }

  ExprPtr parse_test()
  {
    if (at_kw("lambda"))
      return parse_lambda();
    auto body = parse_or_test();
    if (at_kw("if")) {
      ++pos_;
      auto e = make(ExprKind::IfExp, body->line);
      auto test = parse_or_test();
      expect_kw("else");
      auto orelse = parse_test();
      e->children.push_back(std::move(body));
      e->children.push_back(std::move(test));
      e->children.push_back(std::move(orelse));
      return e;
    }
    return body;
  }

  ExprPtr parse_lambda()
  {
    auto e = make(ExprKind::Lambda, cur().line);
    expect_kw("lambda");
    parse_params(":", false);
    expect_op(":");
    e->children.push_back(parse_test());
    return e;
  }

  ExprPtr binary(std::string op, ExprPtr lhs, ExprPtr rhs)
  {
    auto e = make(ExprKind::Operation, lhs->line, std::move(op));
    e->children.push_back(std::move(lhs));
    e->children.push_back(std::move(rhs));
    return e;
  }

  ExprPtr parse_or_test()
  {
    auto lhs = parse_and_test();
    while (accept_kw("or"))
      lhs = binary("or", std::move(lhs), parse_and_test());
    return lhs;
  }

  ExprPtr parse_and_test()
  {
    auto lhs = parse_not_test();
    while (accept_kw("and"))
      lhs = binary("and", std::move(lhs), parse_not_test());
    return lhs;
  }

  ExprPtr parse_not_test()
  {
    if (at_kw("not")) {
      auto e = make(ExprKind::Operation, cur().line, "not");
      ++pos_;
      e->children.push_back(parse_not_test());
      return e;
    }
    return parse_comparison();
  }

  std::string comparison_op()
  {
    const auto &t = cur();
    if (t.kind == TokenKind::Op &&
        (t.text == "<" || t.text == ">" || t.text == "==" || t.text == ">=" || t.text == "<=" ||
         t.text == "!=")) {
      ++pos_;
      return t.text;
    }
    if (at_kw("in")) {
      ++pos_;
      return "in";
    }
    if (at_kw("not") && ahead(1).kind == TokenKind::Name && ahead(1).text == "in") {
      pos_ += 2;
      return "not in";
    }
    if (at_kw("is")) {
      ++pos_;
      if (accept_kw("not"))
        return "is not";
      return "is";
    }
    return {};
  }

  ExprPtr parse_comparison()
  {
    auto first = parse_expr();
    auto op = comparison_op();
    if (op.empty())
      return first;
    auto e = make(ExprKind::Operation, first->line, op);
    e->children.push_back(std::move(first));
    e->children.push_back(parse_expr());
    while (!(op = comparison_op()).empty())
      e->children.push_back(parse_expr());
    return e;
  }

  template <typename Next>
  ExprPtr parse_binary_level(std::initializer_list<std::string_view> ops, Next next)
  {
    auto lhs = (this->*next)();
    while (true) {
      bool matched = false;
      for (auto op : ops) {
        if (at_op(op)) {
          ++pos_;
          lhs = binary(std::string(op), std::move(lhs), (this->*next)());
          matched = true;
          break;
        }
      }
      if (!matched)
        return lhs;
    }
  }

  ExprPtr parse_expr() { return parse_binary_level({"|"}, &Parser::parse_xor); }
  ExprPtr parse_xor() { return parse_binary_level({"^"}, &Parser::parse_and); }
  ExprPtr parse_and() { return parse_binary_level({"&"}, &Parser::parse_shift); }
  ExprPtr parse_shift() { return parse_binary_level({"<<", ">>"}, &Parser::parse_arith); }
  ExprPtr parse_arith() { return parse_binary_level({"+", "-"}, &Parser::parse_term); }
  ExprPtr parse_term()
  {
    return parse_binary_level({"*", "/", "%", "//", "@"}, &Parser::parse_factor);
  }

  ExprPtr parse_factor()
  {
    if (at_op("+") || at_op("-") || at_op("~")) {
      auto e = make(ExprKind::Operation, cur().line, "unary" + cur().text);
      ++pos_;
      e->children.push_back(parse_factor());
      return e;
    }
    return parse_power();
  }

  ExprPtr parse_power()
  {
    auto base = parse_atom_expr();
    if (accept_op("**"))
      return binary("**", std::move(base), parse_factor());
    return base;
  }

  ExprPtr parse_atom_expr()
  {
    if (at_kw("await")) {
      auto e = make(ExprKind::Await, cur().line);
      ++pos_;
      e->children.push_back(parse_atom_expr());
      return e;
    }
    auto e = parse_atom();
    while (true) {
      if (at_op("(")) {
        auto call = make(ExprKind::Call, cur().line);
        ++pos_;
        call->args = parse_arglist(")");
        expect_op(")");
        call->children.push_back(std::move(e));
        e = std::move(call);
      } else if (at_op("[")) {
        auto sub = make(ExprKind::Subscript, cur().line);
        ++pos_;
        sub->children.push_back(std::move(e));
        parse_subscripts(*sub);
        expect_op("]");
        e = std::move(sub);
      } else if (at_op(".")) {
        ++pos_;
        if (cur().kind != TokenKind::Name)
          fail("expected attribute name");
        auto attr = make(ExprKind::Attribute, cur().line, cur().text);
        ++pos_;
        attr->children.push_back(std::move(e));
        e = std::move(attr);
      } else {
        return e;
      }
    }
  }

  void parse_subscripts(Expr &sub)
  {
    do {
      if (at_op("]"))
        break;
      sub.children.push_back(parse_subscript());
    } while (accept_op(","));
  }

  ExprPtr parse_subscript()
  {
    int line = cur().line;
    ExprPtr lower;
    if (at_op("*"))
      return parse_star_expr();
    if (!at_op(":")) {
      lower = parse_namedexpr_test();
      if (!at_op(":"))
        return lower;
    }
    auto slice = make(ExprKind::Slice, line);
    expect_op(":");
    ExprPtr upper;
    ExprPtr step;
    if (!at_op(":") && !at_op(",") && !at_op("]"))
      upper = parse_test();
    if (accept_op(":")) {
      if (!at_op(",") && !at_op("]"))
        step = parse_test();
    }
    slice->children.push_back(std::move(lower));
    slice->children.push_back(std::move(upper));
    slice->children.push_back(std::move(step));
    return slice;
  }

  std::vector<Argument> parse_arglist(std::string_view closer)
  {
    std::vector<Argument> args;
    while (!at_op(closer)) {
      Argument a;
      if (accept_op("**")) {
        a.double_star = true;
        a.value = parse_test();
      } else if (accept_op("*")) {
        a.star = true;
        a.value = parse_test();
      } else {
        auto e = parse_test();
        if (at_kw("for") || at_kw("async")) {
          a.value = parse_comprehension("generator", std::move(e), nullptr);
        } else if (at_op("=") && e->kind == ExprKind::Name) {
          ++pos_;
          a.keyword = e->name;
          a.value = parse_test();
        } else if (at_op(":=") && e->kind == ExprKind::Name) {
          ++pos_;
          auto n = make(ExprKind::NamedExpr, e->line, e->name);
          n->children.push_back(parse_test());
          a.value = std::move(n);
        } else {
          a.value = std::move(e);
        }
      }
      args.push_back(std::move(a));
      if (!accept_op(","))
        break;
    }
    return args;
  }

  /// Parses `for ... in ... [if ...]*` clauses after an element. Only the
  /// first iterable is kept: it is the one evaluated in the enclosing scope.
  ExprPtr parse_comprehension(std::string kind, ExprPtr element, ExprPtr value)
  {
    auto comp = make(ExprKind::Comprehension, element->line, std::move(kind));
    bool first = true;
    while (at_kw("for") || at_kw("async")) {
      accept_kw("async");
      expect_kw("for");
      parse_exprlist();
      expect_kw("in");
      auto iter = parse_or_test();
      if (first)
        comp->children.push_back(std::move(iter));
      first = false;
      while (accept_kw("if"))
        parse_or_test_nocond();
    }
    (void)value;
    return comp;
  }

  ExprPtr parse_or_test_nocond()
  {
    if (at_kw("lambda"))
      return parse_lambda();
    return parse_or_test();
  }

  ExprPtr parse_atom()
  {
    const Token &t = cur();
    int line = t.line;
    switch (t.kind) {
    case TokenKind::Number: {
      ++pos_;
      return make(ExprKind::Constant, line, number_kind(t.text));
    }
    case TokenKind::String: {
      bool bytes = t.bytes;
      while (at(TokenKind::String))
        ++pos_;
      return make(ExprKind::Constant, line, bytes ? "bytes" : "str");
    }
    case TokenKind::Name: {
      if (t.text == "None" || t.text == "True" || t.text == "False") {
        ++pos_;
        return make(ExprKind::Constant, line, t.text == "None" ? "None" : "bool");
      }
      if (t.text == "yield")
        return parse_yield();
      if (is_keyword(t.text))
        fail("invalid syntax near '" + t.text + "'");
      ++pos_;
      return make(ExprKind::Name, line, t.text);
    }
    case TokenKind::Op: break;
    default: fail("invalid syntax near '" + describe(t) + "'");
    }
    if (accept_op("...")) {
      return make(ExprKind::Constant, line, "Ellipsis");
    }
    if (accept_op("(")) {
      if (accept_op(")"))
        return tuple_of({}, line);
      if (at_kw("yield")) {
        auto y = parse_yield();
        expect_op(")");
        return y;
      }
      auto first = parse_test_or_star();
      if (at_kw("for") || at_kw("async")) {
        auto comp = parse_comprehension("generator", std::move(first), nullptr);
        expect_op(")");
        return comp;
      }
      if (accept_op(")"))
        return first;
      std::vector<ExprPtr> items;
      items.push_back(std::move(first));
      while (accept_op(",")) {
        if (at_op(")"))
          break;
        items.push_back(parse_test_or_star());
      }
      expect_op(")");
      return tuple_of(std::move(items), line);
    }
    if (accept_op("[")) {
      if (accept_op("]"))
        return make(ExprKind::Display, line, "list");
      auto first = parse_test_or_star();
      if (at_kw("for") || at_kw("async")) {
        auto comp = parse_comprehension("list", std::move(first), nullptr);
        expect_op("]");
        return comp;
      }
      auto list = make(ExprKind::Display, line, "list");
      list->children.push_back(std::move(first));
      while (accept_op(",")) {
        if (at_op("]"))
          break;
        list->children.push_back(parse_test_or_star());
      }
      expect_op("]");
      return list;
    }
    if (accept_op("{"))
      return parse_brace_display(line);
    fail("invalid syntax near '" + t.text + "'");
  }

  ExprPtr parse_brace_display(int line)
  {
    if (accept_op("}"))
      return make(ExprKind::Display, line, "dict");
    auto display = make(ExprKind::Display, line, "set");
    bool is_dict = false;
    bool first = true;
    do {
      if (at_op("}"))
        break;
      if (accept_op("**")) {
        is_dict = true;
        auto star = make(ExprKind::Starred, line, "**");
        star->children.push_back(parse_expr());
        display->children.push_back(std::move(star));
      } else if (at_op("*")) {
        display->children.push_back(parse_star_expr());
      } else {
        auto key = parse_namedexpr_test();
        if (accept_op(":")) {
          is_dict = true;
          auto value = parse_test();
          if (first && (at_kw("for") || at_kw("async"))) {
            auto comp = parse_comprehension("dict", std::move(key), std::move(value));
            expect_op("}");
            return comp;
          }
          display->children.push_back(std::move(key));
          display->children.push_back(std::move(value));
        } else {
          if (first && (at_kw("for") || at_kw("async"))) {
            auto comp = parse_comprehension("set", std::move(key), nullptr);
            expect_op("}");
            return comp;
          }
          display->children.push_back(std::move(key));
        }
      }
      first = false;
    } while (accept_op(","));
    expect_op("}");
    display->name = is_dict ? "dict" : "set";
    return display;
  }

  static std::string number_kind(std::string_view text)
  {
    if (text.ends_with('j') || text.ends_with('J'))
      return "complex";
    bool hex = text.size() > 1 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X');
    if (!hex && (text.find('.') != std::string_view::npos ||
                 text.find_first_of("eE") != std::string_view::npos))
      return "float";
    return "int";
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

/// Parses a whole source file. Throws SyntaxError on malformed input.
inline Module parse_python(std::string_view source)
{
  return Parser(tokenize_python(source)).parse_module();
}

} // namespace typegen::python
