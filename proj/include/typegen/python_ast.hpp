#pragma once

#include <memory>
#include <string>
#include <vector>

namespace typegen::python {

// A deliberately small AST: only the distinctions the lowering needs are kept.

enum class ExprKind {
  Name,          // name
  Attribute,     // children[0].name
  Subscript,     // children[0][children[1..]]
  Call,          // children[0](args)
  Constant,      // name = literal kind: int, float, complex, str, bytes, bool, None, Ellipsis
  Operation,     // name = operator; children = operands
  IfExp,         // children = {body, test, orelse}
  Lambda,
  Display,       // name = list | tuple | set | dict; children = elements
  Comprehension, // name = list | set | dict | generator; children = {first iterable}
  Starred,       // *children[0] (or ** when name == "**")
  NamedExpr,     // name := children[0]
  Await,         // await children[0]
  Yield,         // yield [children[0]]
  Slice,         // lower:upper:step, absent parts are null
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Argument {
  std::string keyword; // empty for positional
  ExprPtr value;
  bool star = false;
  bool double_star = false;
};

struct Expr {
  ExprKind kind;
  int line = 0;
  std::string name;
  std::vector<ExprPtr> children;
  std::vector<Argument> args;
};

enum class StmtKind {
  Expr,
  Assign,    // targets = chain of targets, value
  AugAssign, // targets[0] op= value
  AnnAssign, // targets[0] : annotation [= value]
  Import,    // names
  ImportFrom,
  FunctionDef,
  ClassDef,
  If,
  While,
  For,
  With, // exprs = context managers, targets = matching optional `as` targets
  Try,
  Return,
  Raise,
  Pass,
  Break,
  Continue,
  Del,
  Global,
  Nonlocal,
  Assert,
  Skipped, // a construct recognised but not lowered; name says which
};

struct ImportAlias {
  std::string name;   // dotted module (Import) or member (ImportFrom)
  std::string asname; // empty when absent
};

enum class ParamKind { Positional, VarPositional, KeywordOnly, VarKeyword };

struct Param {
  std::string name;
  ParamKind kind = ParamKind::Positional;
  ExprPtr default_value;
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;
using Body = std::vector<StmtPtr>;

struct Handler {
  ExprPtr type;
  std::string name;
  Body body;
};

struct Stmt {
  StmtKind kind;
  int line = 0;
  std::string name;  // def/class name, ImportFrom module, Skipped construct label
  int level = 0;     // relative import level
  std::vector<ExprPtr> targets;
  ExprPtr value;
  std::vector<ExprPtr> exprs;
  std::vector<ImportAlias> names;
  std::vector<Param> params;
  Body body;
  Body orelse;
  Body finalbody;
  std::vector<Handler> handlers;
  std::vector<ExprPtr> decorators;
  std::vector<std::string> identifiers; // global / nonlocal names
};

struct Module {
  Body body;
};

} // namespace typegen::python
