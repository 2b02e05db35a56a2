#pragma once

#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "typegen/ir.hpp"
#include "typegen/usage_map.hpp"

namespace typegen {

inline constexpr long kDefaultInstructionBudget = 200000;
/// Turtle-set elements written per file. Distinct call chains can grow
/// combinatorially on large library-style modules; this keeps time and
/// memory per file bounded.
inline constexpr long kDefaultWorkBudget = 2000000;

/// Abstract stand-in for a value produced by an external API.
struct Turtle {
  int id = 0;
  std::string provenance;
  int function = 0; // creation site
  int ordinal = 0;
  int receiver = 0; // turtle the creating call was made on, 0 for imports
  std::string method;
};

struct AbstractValue {
  std::set<int> turtles;
  std::set<int> functions;
  bool builtin = false;
  bool other = false;

  bool operator==(const AbstractValue &) const = default;

  bool join(const AbstractValue &v)
  {
    bool changed = false;
    for (int t : v.turtles)
      changed |= turtles.insert(t).second;
    for (int f : v.functions)
      changed |= functions.insert(f).second;
    if (v.builtin && !builtin)
      changed = builtin = true;
    if (v.other && !other)
      changed = other = true;
    return changed;
  }

  bool add_turtle(int t) { return turtles.insert(t).second; }

  bool mark_other()
  {
    if (other)
      return false;
    return other = true;
  }
};

struct AnalysisOptions {
  long instruction_budget = kDefaultInstructionBudget;
  long work_budget = kDefaultWorkBudget;
};

struct AnalysisResult {
  UsageMap usages;
  /// turtles[id - 1] is turtle `id`.
  std::vector<Turtle> turtles;
  /// values[function][value id]
  std::vector<std::vector<AbstractValue>> values;
  std::vector<AbstractValue> returns;
  /// Interprocedural events in the order they happened.
  std::vector<std::string> trace;
  bool truncated = false;
  long visits = 0;
  long work = 0;

  const Turtle &turtle(int id) const { return turtles.at(id - 1); }
};

namespace turtle_detail {

using ObservationKey = std::tuple<int, int, int, std::string>; // function, ordinal, receiver, method

class Analyzer {
public:
  Analyzer(const ir::ScriptIR &script, const AnalysisOptions &options)
      : script_(script), options_(options)
  {
    const auto n = script.functions.size();
    result_.values.resize(n);
    result_.returns.resize(n);
    defs_.resize(n);
    callers_.resize(n);
    lexical_dependents_.resize(n);
    for (std::size_t f = 0; f < n; ++f) {
      const auto &fn = script.functions[f];
      result_.values[f].resize(static_cast<std::size_t>(fn.value_count) + 1);
      ir::for_each_instruction(fn, [&](const ir::BasicBlock &, const ir::Instruction &inst, int) {
        if (auto v = ir::defined_value(inst)) {
          defs_[f][*v] = &inst;
        }
      });
    }
  }

  AnalysisResult run()
  {
    for (std::size_t f = 0; f < script_.functions.size(); ++f)
      enqueue(static_cast<int>(f));
    while (!queue_.empty() && !result_.truncated) {
      int f = queue_.front();
      queue_.pop_front();
      queued_.erase(f);
      visit_function(f);
    }
    for (const auto &key : observations_) {
      const auto &[f, ord, receiver, method] = key;
      (void)f;
      (void)ord;
      result_.usages.observe(result_.turtle(receiver).provenance, method);
    }
    result_.usages.files_analyzed = 1;
    result_.usages.files_truncated = result_.truncated ? 1 : 0;
    return std::move(result_);
  }

private:
  void enqueue(int f)
  {
    if (queued_.insert(f).second)
      queue_.push_back(f);
  }

  AbstractValue &value(int f, ir::ValueId v) { return result_.values[f][v]; }

  void charge(std::size_t units)
  {
    result_.work += static_cast<long>(units);
    if (result_.work > options_.work_budget)
      result_.truncated = true;
  }

  void visit_function(int f)
  {
    const auto &fn = script_.functions[f];
    const AbstractValue old_return = result_.returns[f];
    bool any_change = false;
    bool changed = true;
    while (changed) {
      changed = false;
      int ordinal = 0;
      for (const auto &block : fn.blocks) {
        for (const auto &inst : block.instructions) {
          ++ordinal;
          if (++result_.visits > options_.instruction_budget) {
            result_.truncated = true;
            return;
          }
          changed |= transfer(f, inst, ordinal);
          if (auto v = ir::defined_value(inst))
            charge(value(f, *v).turtles.size());
          if (result_.truncated)
            return;
        }
      }
      any_change |= changed;
    }
    if (result_.returns[f] != old_return)
      for (int caller : callers_[f])
        enqueue(caller);
    if (any_change)
      for (int dep : lexical_dependents_[f])
        enqueue(dep);
  }

  bool transfer(int f, const ir::Instruction &inst, int ordinal)
  {
    return std::visit(
        ir::overloaded{
            [&](const ir::Import &op) {
              int t = make_turtle(f, ordinal, 0, "", op.module);
              return value(f, op.target).add_turtle(t);
            },
            [&](const ir::PropertyRead &op) {
              const AbstractValue obj = value(f, op.object);
              auto &target = value(f, op.target);
              bool changed = false;
              for (int t : obj.turtles)
                changed |= target.add_turtle(t);
              if (!obj.functions.empty() || obj.builtin || obj.other)
                changed |= target.mark_other();
              return changed;
            },
            [&](const ir::FunctionCreate &op) {
              return value(f, op.target).functions.insert(op.function_index).second;
            },
            [&](const ir::Phi &op) {
              AbstractValue merged;
              for (auto in : op.inputs)
                merged.join(value(f, in));
              return value(f, op.target).join(merged);
            },
            [&](const ir::Const &op) { return value(f, op.target).mark_other(); },
            [&](const ir::LexicalRead &op) { return lexical_read(f, op); },
            [&](const ir::Return &op) {
              if (!op.value)
                return false;
              const AbstractValue v = value(f, *op.value);
              return result_.returns[f].join(v);
            },
            [&](const ir::Call &op) { return call(f, op, ordinal); },
        },
        inst.op);
  }

  bool lexical_read(int f, const ir::LexicalRead &op)
  {
    auto &target = value(f, op.target);
    if (op.scope == ir::kBuiltinScope) {
      if (target.builtin)
        return false;
      return target.builtin = true;
    }
    lexical_dependents_[op.scope].insert(f);
    const auto &defs = script_.functions[op.scope].name_defs;
    auto it = defs.find(op.name);
    if (it == defs.end())
      return target.mark_other();
    AbstractValue merged;
    for (auto v : it->second)
      merged.join(value(op.scope, v));
    return target.join(merged);
  }

  bool call(int f, const ir::Call &op, int ordinal)
  {
    const AbstractValue callee = value(f, op.callee);
    AbstractValue produced;

    if (!callee.turtles.empty()) {
      std::map<int, std::set<std::string>> methods;
      std::set<std::pair<int, ir::ValueId>> seen;
      collect_methods(f, op.callee, methods, seen);
      for (int t : callee.turtles) {
        if (result_.truncated)
          break;
        auto it = methods.find(t);
        if (it == methods.end()) {
          produced.add_turtle(call_turtle(f, ordinal, t, ""));
          charge(1);
          continue;
        }
        for (const auto &m : it->second) {
          if (!m.empty())
            observations_.insert({f, ordinal, t, m});
          produced.add_turtle(call_turtle(f, ordinal, t, m));
          charge(1);
        }
      }
    }

    for (int g : callee.functions) {
      callers_[g].insert(f);
      bind_arguments(f, op, ordinal, g);
      produced.join(result_.returns[g]);
    }

    if (callee.builtin) {
      for (auto a : op.args)
        for (int t : value(f, a).turtles)
          produced.add_turtle(t);
      for (const auto &kw : op.keywords)
        for (int t : value(f, kw.second).turtles)
          produced.add_turtle(t);
      produced.other = true;
    }
    if (callee.other)
      produced.other = true;

    return value(f, op.target).join(produced);
  }

  /// Gathers, for each turtle the callee may hold, the property names under
  /// which it was read on the way to the call.
  void collect_methods(int f, ir::ValueId v, std::map<int, std::set<std::string>> &out,
                       std::set<std::pair<int, ir::ValueId>> &seen)
  {
    if (!seen.insert({f, v}).second)
      return;
    auto it = defs_[f].find(v);
    if (it == defs_[f].end())
      return;
    std::visit(ir::overloaded{
                   [&](const ir::PropertyRead &op) {
                     const std::string m = op.property == "[]" ? "" : op.property;
                     for (int t : value(f, op.object).turtles)
                       out[t].insert(m);
                   },
                   [&](const ir::Phi &op) {
                     for (auto in : op.inputs)
                       collect_methods(f, in, out, seen);
                   },
                   [&](const ir::LexicalRead &op) {
                     if (op.scope == ir::kBuiltinScope)
                       return;
                     const auto &defs = script_.functions[op.scope].name_defs;
                     if (auto d = defs.find(op.name); d != defs.end())
                       for (auto dv : d->second)
                         collect_methods(op.scope, dv, out, seen);
                   },
                   [](const auto &) {},
               },
               it->second->op);
  }

  void bind_arguments(int f, const ir::Call &op, int ordinal, int g)
  {
    const auto &callee = script_.functions[g];
    bool changed = false;
    std::vector<std::string> bound;
    auto bind = [&](std::size_t param, ir::ValueId arg) {
      const AbstractValue v = value(f, arg);
      auto &slot = value(g, callee.params[param]);
      if (slot.join(v)) {
        charge(slot.turtles.size());
        changed = true;
        bound.push_back(callee.param_names[param] + " <- " + render_turtles(v));
      }
    };
    for (std::size_t i = 0; i < op.args.size() && i < callee.params.size(); ++i)
      bind(i, op.args[i]);
    for (const auto &[name, arg] : op.keywords) {
      for (std::size_t i = 0; i < callee.param_names.size(); ++i)
        if (callee.param_names[i] == name)
          bind(i, arg);
    }
    if (changed || !called_.contains(g)) {
      called_.insert(g);
      std::string line = "queue " + callee.name + " #" + std::to_string(g) + " from " +
                         script_.functions[f].name + "@" + std::to_string(ordinal);
      for (const auto &b : bound)
        line += " bind " + b;
      result_.trace.push_back(std::move(line));
      enqueue(g);
    }
  }

  std::string render_turtles(const AbstractValue &v) const
  {
    std::string s = "{";
    bool first = true;
    for (int t : v.turtles) {
      s += (first ? "t" : ", t") + std::to_string(t);
      first = false;
    }
    return s + "}";
  }

  /// Turtle returned by calling `receiver` (via property `method`, or bare
  /// when empty) at the given site. A receiver already derived from this
  /// site is reused so provenance stays finite around loops and recursion.
  int call_turtle(int f, int ordinal, int receiver, const std::string &method)
  {
    for (int a = receiver; a != 0; a = result_.turtle(a).receiver) {
      const auto &t = result_.turtle(a);
      if (t.function == f && t.ordinal == ordinal && t.method == method && t.receiver != 0)
        return a;
    }
    const auto &base = result_.turtle(receiver).provenance;
    std::string prov = method.empty() ? base + "()" : base + "." + method + "()";
    return make_turtle(f, ordinal, receiver, method, std::move(prov));
  }

  int make_turtle(int f, int ordinal, int receiver, const std::string &method, std::string prov)
  {
    ObservationKey key{f, ordinal, receiver, method};
    if (auto it = turtle_ids_.find(key); it != turtle_ids_.end())
      return it->second;
    int id = static_cast<int>(result_.turtles.size()) + 1;
    result_.turtles.push_back({id, std::move(prov), f, ordinal, receiver, method});
    turtle_ids_.emplace(std::move(key), id);
    return id;
  }

  const ir::ScriptIR &script_;
  AnalysisOptions options_;
  AnalysisResult result_;
  std::vector<std::map<ir::ValueId, const ir::Instruction *>> defs_;
  std::vector<std::set<int>> callers_;
  std::vector<std::set<int>> lexical_dependents_;
  std::set<int> called_;
  std::deque<int> queue_;
  std::set<int> queued_;
  std::map<ObservationKey, int> turtle_ids_;
  std::set<ObservationKey> observations_;
};

} // namespace turtle_detail

/// Worklist fixpoint over every function of the script with turtle semantics
/// for values that come from imports.
inline AnalysisResult analyze_script_detailed(const ir::ScriptIR &script,
                                              const AnalysisOptions &options = {})
{
  return turtle_detail::Analyzer(script, options).run();
}

inline UsageMap analyze_script(const ir::ScriptIR &script, const AnalysisOptions &options = {})
{
  return analyze_script_detailed(script, options).usages;
}

/// IR listing annotated with the final abstract value of every defined
/// value, followed by the turtle table and the interprocedural trace.
inline std::string dump_analysis(const ir::ScriptIR &script, const AnalysisResult &result)
{
  std::ostringstream out;
  out << "script " << script.source_path << "\n";
  for (const auto &fn : script.functions) {
    out << "function #" << fn.index << " " << fn.name << "(";
    for (std::size_t i = 0; i < fn.params.size(); ++i)
      out << (i ? ", " : "") << fn.param_names[i] << "=v" << fn.params[i];
    out << ")\n";
    for (std::size_t i = 0; i < fn.params.size(); ++i) {
      const auto &v = result.values[fn.index][fn.params[i]];
      if (!v.turtles.empty()) {
        out << "  param v" << fn.params[i] << " :";
        for (int t : v.turtles)
          out << " t" << t;
        out << "\n";
      }
    }
    int ordinal = 0;
    for (const auto &block : fn.blocks) {
      out << "BB" << block.id;
      if (!block.successors.empty()) {
        out << " ->";
        for (auto s : block.successors)
          out << " BB" << s;
      }
      out << "\n";
      for (const auto &inst : block.instructions) {
        out << "  " << ++ordinal << ": " << ir::render(inst, script.functions);
        if (auto v = ir::defined_value(inst)) {
          const auto &av = result.values[fn.index][*v];
          std::vector<std::string> parts;
          for (int t : av.turtles)
            parts.push_back("t" + std::to_string(t));
          for (int g : av.functions)
            parts.push_back("fn " + script.functions[g].name);
          if (!parts.empty())
            out << "  ; " << join(parts, " ");
        }
        out << "\n";
      }
    }
  }
  out << "turtles\n";
  for (const auto &t : result.turtles)
    out << "  t" << t.id << " = " << t.provenance << " @" << script.functions[t.function].name
        << ":" << t.ordinal << "\n";
  out << "trace\n";
  for (const auto &line : result.trace)
    out << "  " << line << "\n";
  if (result.truncated)
    out << "truncated after " << result.visits << " visits, " << result.work << " work units\n";
  return out.str();
}

} // namespace typegen
