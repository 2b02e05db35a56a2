#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "typegen/ir.hpp"
#include "typegen/python_ast.hpp"
#include "typegen/python_parser.hpp"

namespace typegen {

/// A script that could not be parsed at all.
class ParseFailure : public std::runtime_error {
public:
  ParseFailure(std::string path, int line, const std::string &message)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + message),
        path_(std::move(path)), line_(line)
  {
  }
  const std::string &path() const noexcept { return path_; }
  int line() const noexcept { return line_; }

private:
  std::string path_;
  int line_;
};

namespace frontend_detail {

using namespace typegen::python;

inline bool is_python_builtin(std::string_view name)
{
  static const std::set<std::string_view> names = {
      "abs", "aiter", "all", "anext", "any", "ascii", "bin", "bool", "breakpoint", "bytearray",
      "bytes", "callable", "chr", "classmethod", "compile", "complex", "copyright", "credits",
      "delattr", "dict", "dir", "divmod", "enumerate", "eval", "exec", "exit", "filter", "float",
      "format", "frozenset", "getattr", "globals", "hasattr", "hash", "help", "hex", "id",
      "input", "int", "isinstance", "issubclass", "iter", "len", "license", "list", "locals",
      "map", "max", "memoryview", "min", "next", "object", "oct", "open", "ord", "pow", "print",
      "property", "quit", "range", "repr", "reversed", "round", "set", "setattr", "slice",
      "sorted", "staticmethod", "str", "sum", "super", "tuple", "type", "vars", "zip",
      "__import__", "__name__", "__file__", "__doc__", "__builtins__", "__spec__",
      "__package__", "__loader__", "NotImplemented", "Ellipsis", "BaseException", "Exception",
      "ArithmeticError", "AssertionError", "AttributeError", "EOFError", "ImportError",
      "IndexError", "KeyError", "KeyboardInterrupt", "LookupError", "MemoryError",
      "NameError", "NotImplementedError", "OSError", "IOError", "OverflowError",
      "RecursionError", "RuntimeError", "StopIteration", "SyntaxError", "SystemExit",
      "TypeError", "ValueError", "ZeroDivisionError", "FileNotFoundError", "Warning",
      "UserWarning", "DeprecationWarning", "UnicodeDecodeError", "UnicodeEncodeError",
      "PermissionError", "TimeoutError", "ConnectionError", "ModuleNotFoundError"};
  return names.contains(name);
}

using Env = std::map<std::string, ir::ValueId>;

/// Collects the names a function body binds, without descending into
/// nested function or class bodies.
class BindingCollector {
public:
  std::set<std::string> names;
  std::set<std::string> globals;
  std::set<std::string> nonlocals;

  void body(const Body &stmts)
  {
    for (const auto &s : stmts)
      stmt(*s);
  }

  void target(const Expr &e)
  {
    switch (e.kind) {
    case ExprKind::Name: names.insert(e.name); break;
    case ExprKind::Display:
      for (const auto &c : e.children)
        target(*c);
      break;
    case ExprKind::Starred: target(*e.children[0]); break;
    default: break;
    }
  }

  void expr(const Expr &e)
  {
    if (e.kind == ExprKind::NamedExpr)
      names.insert(e.name);
    if (e.kind == ExprKind::Lambda || e.kind == ExprKind::Comprehension) {
      for (const auto &c : e.children)
        if (c && e.kind == ExprKind::Comprehension)
          expr(*c);
      return;
    }
    for (const auto &c : e.children)
      if (c)
        expr(*c);
    for (const auto &a : e.args)
      if (a.value)
        expr(*a.value);
  }

  void stmt(const Stmt &s)
  {
    switch (s.kind) {
    case StmtKind::Assign:
    case StmtKind::AugAssign:
    case StmtKind::AnnAssign:
    case StmtKind::For:
      for (const auto &t : s.targets)
        if (t)
          target(*t);
      break;
    case StmtKind::With:
      for (const auto &t : s.targets)
        if (t)
          target(*t);
      break;
    case StmtKind::Import:
      for (const auto &a : s.names)
        names.insert(a.asname.empty() ? a.name.substr(0, a.name.find('.')) : a.asname);
      break;
    case StmtKind::ImportFrom:
      for (const auto &a : s.names)
        if (a.name != "*")
          names.insert(a.asname.empty() ? a.name : a.asname);
      break;
    case StmtKind::FunctionDef:
    case StmtKind::ClassDef: names.insert(s.name); return;
    case StmtKind::Global:
      globals.insert(s.identifiers.begin(), s.identifiers.end());
      break;
    case StmtKind::Nonlocal:
      nonlocals.insert(s.identifiers.begin(), s.identifiers.end());
      break;
    default: break;
    }
    if (s.value)
      expr(*s.value);
    for (const auto &e : s.exprs)
      if (e)
        expr(*e);
    body(s.body);
    body(s.orelse);
    body(s.finalbody);
    for (const auto &h : s.handlers) {
      if (!h.name.empty())
        names.insert(h.name);
      body(h.body);
    }
  }
};

struct Scope {
  int function_index;
  std::set<std::string> locals;
};

struct LoopContext {
  int header;
  std::map<std::string, std::pair<int, std::size_t>> phis; // name -> (block, instruction slot)
  std::vector<std::pair<int, Env>> breaks;
  std::vector<std::pair<int, Env>> continues;
};

/// Lowers one function body into SSA form. Nested functions get their own
/// Lowerer, sharing the script and the scope chain.
class Lowerer {
public:
  Lowerer(ir::ScriptIR &script, int fn_index, std::vector<Scope> scopes, bool star_import)
      : script_(script), fn_index_(fn_index), scopes_(std::move(scopes)),
        star_import_(star_import)
  {
  }

  void lower_function(const std::vector<Param> &params, const Body &body)
  {
    BindingCollector bindings;
    bindings.body(body);
    for (const auto &p : params)
      bindings.names.insert(p.name);
    for (const auto &g : bindings.globals)
      bindings.names.erase(g);
    for (const auto &n : bindings.nonlocals)
      bindings.names.erase(n);
    globals_ = bindings.globals;
    scopes_.push_back({fn_index_, bindings.names});

    cur_ = new_block();
    for (const auto &p : params) {
      auto v = new_value();
      fn().params.push_back(v);
      fn().param_names.push_back(p.name);
      bind(p.name, v);
    }
    lower_body(body);
  }

private:
  ir::FunctionIR &fn() { return script_.functions[fn_index_]; }

  ir::ValueId new_value() { return ++fn().value_count; }

  int new_block()
  {
    int id = static_cast<int>(fn().blocks.size());
    fn().blocks.push_back({id, {}, {}});
    return id;
  }

  void edge(int from, int to)
  {
    auto &succ = fn().blocks[from].successors;
    if (std::find(succ.begin(), succ.end(), to) == succ.end())
      succ.push_back(to);
  }

  void warn(const std::string &kind) { ++script_.warnings[kind]; }

  void emit(ir::Op op, int line)
  {
    if (cur_ < 0)
      return;
    fn().blocks[cur_].instructions.push_back({std::move(op), line});
  }

  ir::ValueId emit_const(std::string kind, int line)
  {
    auto v = new_value();
    emit(ir::Const{v, std::move(kind)}, line);
    return v;
  }

  void bind(const std::string &name, ir::ValueId v)
  {
    env_[name] = v;
    auto &defs = fn().name_defs[name];
    if (std::find(defs.begin(), defs.end(), v) == defs.end())
      defs.push_back(v);
  }

  /// Value of `name` at the current point.
  ir::ValueId read(const std::string &name, int line)
  {
    if (auto it = env_.find(name); it != env_.end())
      return it->second;
    const auto &own = scopes_.back();
    if (own.locals.contains(name) && !globals_.contains(name))
      return emit_const("undefined", line);
    int start = static_cast<int>(scopes_.size()) - 2;
    if (globals_.contains(name))
      start = 0;
    for (int i = start; i >= 0; --i) {
      // class bodies are not scopes; module scope is scopes_[0]
      if (scopes_[i].locals.contains(name)) {
        auto v = new_value();
        emit(ir::LexicalRead{v, name, scopes_[i].function_index}, line);
        return v;
      }
    }
    if (star_import_ && !is_python_builtin(name)) {
      auto star = new_value();
      emit(ir::LexicalRead{star, "*", 0}, line);
      auto v = new_value();
      emit(ir::PropertyRead{v, star, name}, line);
      return v;
    }
    auto v = new_value();
    emit(ir::LexicalRead{v, name, ir::kBuiltinScope}, line);
    return v;
  }

  // -------------------------------------------------------------------------
  // Control-flow joins
  // -------------------------------------------------------------------------

  /// Creates a join block for the reaching (block, env) pairs, inserting phis
  /// where the incoming bindings differ. Leaves cur_ = -1 when nothing reaches.
  void merge(std::vector<std::pair<int, Env>> preds, int line)
  {
    if (preds.empty()) {
      cur_ = -1;
      return;
    }
    int join = new_block();
    for (const auto &[b, env] : preds)
      edge(b, join);
    cur_ = join;
    if (preds.size() == 1) {
      env_ = std::move(preds.front().second);
      return;
    }
    std::set<std::string> names;
    for (const auto &[b, env] : preds)
      for (const auto &[n, v] : env)
        names.insert(n);
    Env merged;
    for (const auto &n : names) {
      std::vector<ir::ValueId> inputs;
      bool everywhere = true;
      for (const auto &[b, env] : preds) {
        auto it = env.find(n);
        if (it == env.end()) {
          everywhere = false;
          continue;
        }
        if (std::find(inputs.begin(), inputs.end(), it->second) == inputs.end())
          inputs.push_back(it->second);
      }
      if (everywhere && inputs.size() == 1) {
        merged[n] = inputs.front();
        continue;
      }
      auto v = new_value();
      emit(ir::Phi{v, inputs}, line);
      merged[n] = v;
      auto &defs = fn().name_defs[n];
      defs.push_back(v);
    }
    env_ = std::move(merged);
  }

  std::set<std::string> assigned_in(const Body &body, const Expr *extra_target)
  {
    BindingCollector c;
    c.body(body);
    if (extra_target != nullptr)
      c.target(*extra_target);
    return c.names;
  }

  /// Opens a loop header with one phi per name the loop may rebind.
  LoopContext open_loop(const std::set<std::string> &assigned, int line)
  {
    int header = new_block();
    edge(cur_, header);
    cur_ = header;
    LoopContext ctx{header, {}, {}, {}};
    for (const auto &name : assigned) {
      if (globals_.contains(name))
        continue;
      auto v = new_value();
      ir::Phi phi{v, {}};
      if (auto it = env_.find(name); it != env_.end())
        phi.inputs.push_back(it->second);
      auto slot = fn().blocks[header].instructions.size();
      emit(phi, line);
      ctx.phis[name] = {header, slot};
      bind(name, v);
    }
    return ctx;
  }

  void close_loop(LoopContext &ctx)
  {
    for (const auto &[b, env] : ctx.continues) {
      edge(b, ctx.header);
      for (const auto &[name, slot] : ctx.phis) {
        auto it = env.find(name);
        if (it == env.end())
          continue;
        auto &phi = std::get<ir::Phi>(fn().blocks[slot.first].instructions[slot.second].op);
        if (it->second != phi.target &&
            std::find(phi.inputs.begin(), phi.inputs.end(), it->second) == phi.inputs.end())
          phi.inputs.push_back(it->second);
      }
    }
  }

  // -------------------------------------------------------------------------
  // Statements
  // -------------------------------------------------------------------------

  void lower_body(const Body &body)
  {
    for (const auto &s : body) {
      if (cur_ < 0)
        return; // unreachable code after return/raise/break
      lower_stmt(*s);
    }
  }

  void lower_stmt(const Stmt &s)
  {
    switch (s.kind) {
    case StmtKind::Expr: lower_expr(*s.value); break;
    case StmtKind::Assign: {
      auto v = lower_expr(*s.value);
      for (const auto &t : s.targets)
        assign(*t, v);
      break;
    }
    case StmtKind::AugAssign: {
      const auto &t = *s.targets[0];
      if (t.kind == ExprKind::Name)
        read(t.name, s.line);
      else
        lower_target_parts(t);
      lower_expr(*s.value);
      auto v = emit_const("op", s.line);
      if (t.kind == ExprKind::Name)
        bind(t.name, v);
      break;
    }
    case StmtKind::AnnAssign:
      if (s.value)
        assign(*s.targets[0], lower_expr(*s.value));
      break;
    case StmtKind::Import:
      for (const auto &a : s.names) {
        auto v = new_value();
        emit(ir::Import{v, a.name}, s.line);
        bind(a.asname.empty() ? a.name.substr(0, a.name.find('.')) : a.asname, v);
      }
      break;
    case StmtKind::ImportFrom: lower_import_from(s); break;
    case StmtKind::FunctionDef: lower_def(s); break;
    case StmtKind::ClassDef:
      warn("class_def");
      for (const auto &d : s.decorators)
        lower_expr(*d);
      for (const auto &b : s.exprs)
        if (b)
          lower_expr(*b);
      bind(s.name, emit_const("class", s.line));
      break;
    case StmtKind::If: lower_if(s); break;
    case StmtKind::While: lower_while(s); break;
    case StmtKind::For: lower_for(s); break;
    case StmtKind::With:
      for (std::size_t i = 0; i < s.exprs.size(); ++i) {
        auto v = lower_expr(*s.exprs[i]);
        if (s.targets[i])
          assign(*s.targets[i], v);
      }
      lower_body(s.body);
      break;
    case StmtKind::Try: lower_try(s); break;
    case StmtKind::Return: {
      std::optional<ir::ValueId> v;
      if (s.value)
        v = lower_expr(*s.value);
      emit(ir::Return{v}, s.line);
      cur_ = -1;
      break;
    }
    case StmtKind::Raise:
      if (s.value)
        lower_expr(*s.value);
      for (const auto &e : s.exprs)
        lower_expr(*e);
      cur_ = -1;
      break;
    case StmtKind::Break:
      if (!loops_.empty())
        loops_.back().breaks.emplace_back(cur_, env_);
      cur_ = -1;
      break;
    case StmtKind::Continue:
      if (!loops_.empty())
        loops_.back().continues.emplace_back(cur_, env_);
      cur_ = -1;
      break;
    case StmtKind::Del:
      for (const auto &e : s.exprs)
        lower_del(*e);
      break;
    case StmtKind::Assert:
      for (const auto &e : s.exprs)
        lower_expr(*e);
      break;
    case StmtKind::Global:
    case StmtKind::Nonlocal:
    case StmtKind::Pass: break;
    case StmtKind::Skipped: warn(s.name); break;
    }
  }

  void lower_del(const Expr &e)
  {
    if (e.kind == ExprKind::Name) {
      env_.erase(e.name);
    } else if (e.kind == ExprKind::Display) {
      for (const auto &c : e.children)
        lower_del(*c);
    } else {
      lower_target_parts(e);
    }
  }

  void lower_import_from(const Stmt &s)
  {
    if (s.level > 0) {
      warn("relative_import");
      for (const auto &a : s.names)
        if (a.name != "*")
          bind(a.asname.empty() ? a.name : a.asname, emit_const("relative_import", s.line));
      return;
    }
    auto module = new_value();
    emit(ir::Import{module, s.name}, s.line);
    for (const auto &a : s.names) {
      if (a.name == "*") {
        if (fn_index_ == 0)
          bind("*", module);
        continue;
      }
      auto v = new_value();
      emit(ir::PropertyRead{v, module, a.name}, s.line);
      bind(a.asname.empty() ? a.name : a.asname, v);
    }
  }

  void lower_def(const Stmt &s)
  {
    for (const auto &d : s.decorators)
      lower_expr(*d);
    if (!s.decorators.empty())
      warn("decorator");
    for (const auto &p : s.params)
      if (p.default_value)
        lower_expr(*p.default_value);
    int index = static_cast<int>(script_.functions.size());
    ir::FunctionIR nested;
    nested.name = s.name;
    nested.index = index;
    nested.parent = fn_index_;
    script_.functions.push_back(std::move(nested));
    auto v = new_value();
    emit(ir::FunctionCreate{v, index}, s.line);
    bind(s.name, v);
    Lowerer inner(script_, index, scopes_, star_import_);
    inner.lower_function(s.params, s.body);
  }

  void lower_if(const Stmt &s)
  {
    lower_expr(*s.value);
    int pre = cur_;
    Env env0 = env_;
    std::vector<std::pair<int, Env>> exits;

    int then_b = new_block();
    edge(pre, then_b);
    cur_ = then_b;
    lower_body(s.body);
    if (cur_ >= 0)
      exits.emplace_back(cur_, env_);

    int else_b = new_block();
    edge(pre, else_b);
    cur_ = else_b;
    env_ = env0;
    lower_body(s.orelse);
    if (cur_ >= 0)
      exits.emplace_back(cur_, env_);

    merge(std::move(exits), s.line);
  }

  void lower_while(const Stmt &s)
  {
    auto assigned = assigned_in(s.body, nullptr);
    loops_.push_back(open_loop(assigned, s.line));
    lower_expr(*s.value);
    int header_exit = cur_;
    Env header_env = env_;
    int body_b = new_block();
    edge(header_exit, body_b);
    cur_ = body_b;
    lower_body(s.body);
    if (cur_ >= 0)
      loops_.back().continues.emplace_back(cur_, env_);
    finish_loop(s, header_exit, std::move(header_env));
  }

  void lower_for(const Stmt &s)
  {
    auto iterable = lower_expr(*s.value);
    auto assigned = assigned_in(s.body, s.targets[0].get());
    loops_.push_back(open_loop(assigned, s.line));
    int header_exit = cur_;
    Env header_env = env_;
    int body_b = new_block();
    edge(header_exit, body_b);
    cur_ = body_b;
    auto element = new_value();
    emit(ir::PropertyRead{element, iterable, "[]"}, s.line);
    assign(*s.targets[0], element);
    lower_body(s.body);
    if (cur_ >= 0)
      loops_.back().continues.emplace_back(cur_, env_);
    finish_loop(s, header_exit, std::move(header_env));
  }

  void finish_loop(const Stmt &s, int header_exit, Env header_env)
  {
    auto ctx = std::move(loops_.back());
    loops_.pop_back();
    close_loop(ctx);
    int else_b = new_block();
    edge(header_exit, else_b);
    cur_ = else_b;
    env_ = std::move(header_env);
    lower_body(s.orelse);
    auto exits = std::move(ctx.breaks);
    if (cur_ >= 0)
      exits.emplace_back(cur_, env_);
    merge(std::move(exits), s.line);
  }

  void lower_try(const Stmt &s)
  {
    int pre = cur_;
    Env env0 = env_;
    std::vector<std::pair<int, Env>> exits;

    int try_b = new_block();
    edge(pre, try_b);
    cur_ = try_b;
    lower_body(s.body);
    int try_end = cur_;
    Env try_env = env_;
    if (cur_ >= 0) {
      lower_body(s.orelse);
      if (cur_ >= 0)
        exits.emplace_back(cur_, env_);
    }

    for (const auto &h : s.handlers) {
      std::vector<std::pair<int, Env>> entry{{pre, env0}};
      if (try_end >= 0)
        entry.emplace_back(try_end, try_env);
      merge(std::move(entry), s.line);
      if (h.type)
        lower_expr(*h.type);
      if (!h.name.empty())
        bind(h.name, emit_const("exception", s.line));
      lower_body(h.body);
      if (cur_ >= 0)
        exits.emplace_back(cur_, env_);
    }

    if (exits.empty() && !s.finalbody.empty()) {
      int fin = new_block();
      edge(pre, fin);
      cur_ = fin;
      env_ = env0;
      lower_body(s.finalbody);
      cur_ = -1;
      return;
    }
    merge(std::move(exits), s.line);
    if (cur_ >= 0)
      lower_body(s.finalbody);
  }

  // -------------------------------------------------------------------------
  // Assignment targets
  // -------------------------------------------------------------------------

  void assign(const Expr &target, ir::ValueId v)
  {
    switch (target.kind) {
    case ExprKind::Name: bind(target.name, v); break;
    case ExprKind::Display:
      for (const auto &elem : target.children) {
        if (elem->kind == ExprKind::Starred) {
          assign(*elem->children[0], emit_const("list", target.line));
          continue;
        }
        auto part = new_value();
        emit(ir::PropertyRead{part, v, "[]"}, target.line);
        assign(*elem, part);
      }
      break;
    case ExprKind::Starred: assign(*target.children[0], v); break;
    default: lower_target_parts(target); break;
    }
  }

  /// Evaluates the object and index parts of an attribute/subscript store.
  void lower_target_parts(const Expr &target)
  {
    if (target.kind == ExprKind::Attribute) {
      lower_expr(*target.children[0]);
    } else if (target.kind == ExprKind::Subscript) {
      for (const auto &c : target.children)
        if (c)
          lower_expr(*c);
    } else {
      lower_expr(target);
    }
  }

  // -------------------------------------------------------------------------
  // Expressions
  // -------------------------------------------------------------------------

  ir::ValueId lower_expr(const Expr &e)
  {
    switch (e.kind) {
    case ExprKind::Name: return read(e.name, e.line);
    case ExprKind::Constant: return emit_const(e.name, e.line);
    case ExprKind::Attribute: {
      auto obj = lower_expr(*e.children[0]);
      auto v = new_value();
      emit(ir::PropertyRead{v, obj, e.name}, e.line);
      return v;
    }
    case ExprKind::Subscript: {
      auto obj = lower_expr(*e.children[0]);
      for (std::size_t i = 1; i < e.children.size(); ++i)
        if (e.children[i])
          lower_expr(*e.children[i]);
      auto v = new_value();
      emit(ir::PropertyRead{v, obj, "[]"}, e.line);
      return v;
    }
    case ExprKind::Call: {
      auto callee = lower_expr(*e.children[0]);
      ir::Call call{0, callee, {}, {}};
      for (const auto &a : e.args) {
        auto v = lower_expr(*a.value);
        if (a.double_star)
          call.keywords.emplace_back("**", v);
        else if (!a.keyword.empty())
          call.keywords.emplace_back(a.keyword, v);
        else
          call.args.push_back(v);
      }
      call.target = new_value();
      auto target = call.target;
      emit(std::move(call), e.line);
      return target;
    }
    case ExprKind::Operation:
      for (const auto &c : e.children)
        lower_expr(*c);
      return emit_const("op", e.line);
    case ExprKind::IfExp: return lower_ifexp(e);
    case ExprKind::Lambda: warn("lambda"); return emit_const("lambda", e.line);
    case ExprKind::Display:
      for (const auto &c : e.children)
        lower_expr(*c);
      return emit_const(e.name, e.line);
    case ExprKind::Comprehension:
      warn("comprehension");
      for (const auto &c : e.children)
        lower_expr(*c);
      return emit_const(e.name, e.line);
    case ExprKind::Starred: return lower_expr(*e.children[0]);
    case ExprKind::NamedExpr: {
      auto v = lower_expr(*e.children[0]);
      bind(e.name, v);
      return v;
    }
    case ExprKind::Await: return lower_expr(*e.children[0]);
    case ExprKind::Yield:
      for (const auto &c : e.children)
        lower_expr(*c);
      return emit_const("yield", e.line);
    case ExprKind::Slice:
      for (const auto &c : e.children)
        if (c)
          lower_expr(*c);
      return emit_const("slice", e.line);
    }
    return emit_const("unknown", e.line);
  }

  ir::ValueId lower_ifexp(const Expr &e)
  {
    lower_expr(*e.children[1]);
    int pre = cur_;
    Env env0 = env_;
    std::vector<std::pair<int, Env>> exits;
    std::vector<ir::ValueId> results;
    for (int branch : {0, 2}) {
      int b = new_block();
      edge(pre, b);
      cur_ = b;
      env_ = env0;
      results.push_back(lower_expr(*e.children[branch]));
      exits.emplace_back(cur_, env_);
    }
    const std::string tmp = " ifexp" + std::to_string(++ifexp_counter_);
    exits[0].second[tmp] = results[0];
    exits[1].second[tmp] = results[1];
    merge(std::move(exits), e.line);
    auto v = env_.at(tmp);
    env_.erase(tmp);
    return v;
  }

  ir::ScriptIR &script_;
  int fn_index_;
  std::vector<Scope> scopes_;
  bool star_import_;
  std::set<std::string> globals_;
  Env env_;
  int cur_ = -1;
  int ifexp_counter_ = 0;
  std::vector<LoopContext> loops_;
};

inline bool has_star_import(const Body &body)
{
  for (const auto &s : body) {
    if (s->kind == StmtKind::ImportFrom && s->level == 0) {
      for (const auto &a : s->names)
        if (a.name == "*")
          return true;
    }
  }
  return false;
}

} // namespace frontend_detail

/// Parses and lowers one source file. Function 0 is the script top level;
/// nested definitions follow in source order.
inline ir::ScriptIR parse_script(std::string_view source, const std::string &path)
{
  python::Module module;
  try {
    module = python::parse_python(source);
  } catch (const python::SyntaxError &e) {
    throw ParseFailure(path, e.line(), e.what());
  }
  ir::ScriptIR script;
  script.source_path = path;
  ir::FunctionIR top;
  top.name = "<module>";
  top.index = 0;
  top.parent = -1;
  script.functions.push_back(std::move(top));
  frontend_detail::Lowerer lowerer(script, 0, {}, frontend_detail::has_star_import(module.body));
  lowerer.lower_function({}, module.body);
  return script;
}

/// Analysis roots: the top level, then every defined function in source order.
inline std::vector<const ir::FunctionIR *> enumerate_roots(const ir::ScriptIR &script)
{
  std::vector<const ir::FunctionIR *> roots;
  roots.reserve(script.functions.size());
  for (const auto &fn : script.functions)
    roots.push_back(&fn);
  return roots;
}

} // namespace typegen
