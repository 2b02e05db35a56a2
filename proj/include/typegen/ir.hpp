#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace typegen::ir {

/// SSA value number, local to one function. 0 is never assigned.
using ValueId = int;

/// Scope index meaning "not bound by the script": a builtin or unknown global.
inline constexpr int kBuiltinScope = -1;

struct Import {
  ValueId target;
  std::string module;
};

/// `object.property`. Subscripts and iteration use the property "[]".
struct PropertyRead {
  ValueId target;
  ValueId object;
  std::string property;
};

struct Call {
  ValueId target;
  ValueId callee;
  std::vector<ValueId> args;
  std::vector<std::pair<std::string, ValueId>> keywords;
};

struct FunctionCreate {
  ValueId target;
  int function_index;
};

struct Phi {
  ValueId target;
  std::vector<ValueId> inputs;
};

struct Return {
  std::optional<ValueId> value;
};

/// A value the analysis does not track: literals, operator results,
/// containers, lambdas, local classes.
struct Const {
  ValueId target;
  std::string kind;
};

/// Read of a name bound in an enclosing function (`scope` is that
/// function's index) or, with kBuiltinScope, of a builtin.
struct LexicalRead {
  ValueId target;
  std::string name;
  int scope;
};

using Op = std::variant<Import, PropertyRead, Call, FunctionCreate, Phi, Return, Const, LexicalRead>;

struct Instruction {
  Op op;
  int line = 0;
};

struct BasicBlock {
  int id = 0;
  std::vector<Instruction> instructions;
  std::vector<int> successors;
};

struct FunctionIR {
  std::string name;
  int index = 0;
  /// Lexically enclosing function, -1 for the script top level.
  int parent = -1;
  std::vector<ValueId> params;
  std::vector<std::string> param_names;
  std::vector<BasicBlock> blocks;
  int value_count = 0;
  /// Every value ever bound to a local name; lexical reads from nested
  /// functions see the union of these.
  std::map<std::string, std::vector<ValueId>> name_defs;
};

struct ScriptIR {
  std::string source_path;
  std::vector<FunctionIR> functions;
  /// Constructs that were recognised but not lowered, by kind.
  std::map<std::string, int> warnings;
};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline std::optional<ValueId> defined_value(const Instruction &inst)
{
  return std::visit(overloaded{
                        [](const Return &) -> std::optional<ValueId> { return std::nullopt; },
                        [](const auto &op) -> std::optional<ValueId> { return op.target; },
                    },
                    inst.op);
}

inline std::vector<ValueId> used_values(const Instruction &inst)
{
  return std::visit(overloaded{
                        [](const PropertyRead &op) { return std::vector<ValueId>{op.object}; },
                        [](const Call &op) {
                          std::vector<ValueId> out{op.callee};
                          out.insert(out.end(), op.args.begin(), op.args.end());
                          for (const auto &kw : op.keywords)
                            out.push_back(kw.second);
                          return out;
                        },
                        [](const Phi &op) { return op.inputs; },
                        [](const Return &op) {
                          return op.value ? std::vector<ValueId>{*op.value}
                                          : std::vector<ValueId>{};
                        },
                        [](const auto &) { return std::vector<ValueId>{}; },
                    },
                    inst.op);
}

/// Visits instructions of a function in block order together with their
/// function-wide ordinal (1-based), the number shown in dumps.
template <typename Fn>
void for_each_instruction(const FunctionIR &fn, Fn &&visit)
{
  int ordinal = 0;
  for (const auto &block : fn.blocks) {
    for (const auto &inst : block.instructions)
      visit(block, inst, ++ordinal);
  }
}

inline std::string render(const Instruction &inst, const std::vector<FunctionIR> &functions)
{
  auto v = [](ValueId id) { return "v" + std::to_string(id); };
  return std::visit(
      overloaded{
          [&](const Import &op) { return v(op.target) + " = import " + op.module; },
          [&](const PropertyRead &op) {
            return v(op.target) + " = getfield " + v(op.object) + "." + op.property;
          },
          [&](const Call &op) {
            std::string s = v(op.target) + " = call " + v(op.callee) + "(";
            bool first = true;
            for (auto a : op.args) {
              s += (first ? "" : ", ") + v(a);
              first = false;
            }
            for (const auto &[k, a] : op.keywords) {
              s += (first ? "" : ", ") + k + "=" + v(a);
              first = false;
            }
            return s + ")";
          },
          [&](const FunctionCreate &op) {
            std::string name = op.function_index < static_cast<int>(functions.size())
                                   ? functions[op.function_index].name
                                   : "?";
            return v(op.target) + " = function " + name + " #" +
                   std::to_string(op.function_index);
          },
          [&](const Phi &op) {
            std::string s = v(op.target) + " = phi ";
            bool first = true;
            for (auto a : op.inputs) {
              s += (first ? "" : ", ") + v(a);
              first = false;
            }
            return s;
          },
          [&](const Return &op) { return op.value ? "return " + v(*op.value) : std::string("return"); },
          [&](const Const &op) { return v(op.target) + " = const " + op.kind; },
          [&](const LexicalRead &op) {
            return v(op.target) + " = lexical " + op.name +
                   (op.scope == kBuiltinScope ? std::string(" @builtin")
                                              : " @" + std::to_string(op.scope));
          },
      },
      inst.op);
}

/// Textual listing: one header per function, blocks labelled BB0..BBn,
/// instructions numbered per function.
inline std::string dump(const ScriptIR &script)
{
  std::ostringstream out;
  out << "script " << script.source_path << "\n";
  for (const auto &fn : script.functions) {
    out << "function #" << fn.index << " " << fn.name << "(";
    for (std::size_t i = 0; i < fn.params.size(); ++i)
      out << (i ? ", " : "") << fn.param_names[i] << "=v" << fn.params[i];
    out << ")\n";
    int ordinal = 0;
    for (const auto &block : fn.blocks) {
      out << "BB" << block.id;
      if (!block.successors.empty()) {
        out << " ->";
        for (auto s : block.successors)
          out << " BB" << s;
      }
      out << "\n";
      for (const auto &inst : block.instructions)
        out << "  " << ++ordinal << ": " << render(inst, script.functions) << "\n";
    }
  }
  return out.str();
}

} // namespace typegen::ir
