#pragma once

#include <algorithm>
#include <deque>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "typegen/common.hpp"
#include "typegen/qualified_name.hpp"

namespace typegen {

enum class TypeCategory { Primitive, Builtin, UserClass, NoneType, Any, Module, Unknown };

inline std::string_view to_string(TypeCategory c)
{
  switch (c) {
  case TypeCategory::Primitive: return "Primitive";
  case TypeCategory::Builtin: return "Builtin";
  case TypeCategory::UserClass: return "UserClass";
  case TypeCategory::NoneType: return "NoneType";
  case TypeCategory::Any: return "Any";
  case TypeCategory::Module: return "Module";
  case TypeCategory::Unknown: return "Unknown";
  }
  return "Unknown";
}

inline constexpr TypeCategory kAllCategories[] = {
    TypeCategory::Primitive, TypeCategory::Builtin, TypeCategory::UserClass,
    TypeCategory::NoneType,  TypeCategory::Any,     TypeCategory::Module,
    TypeCategory::Unknown,
};

/// Fixed names of the analyzed language's own types. Overridable from the
/// pipeline configuration.
struct Vocabulary {
  std::set<std::string, std::less<>> primitives{"int", "float", "bool", "str", "bytes", "complex"};
  std::set<std::string, std::less<>> builtins{"list",  "dict",   "tuple",     "set",
                                              "frozenset", "object", "type", "bytearray",
                                              "slice", "range"};
  std::set<std::string, std::less<>> none_names{"None", "NoneType"};
  std::set<std::string, std::less<>> any_names{"Any", "typing.Any"};

  bool contains(std::string_view name) const
  {
    return primitives.contains(name) || builtins.contains(name) || none_names.contains(name) ||
           any_names.contains(name);
  }
};

struct ClassEntry {
  QualifiedName name;
  std::set<std::string, std::less<>> methods;
  TypeSet bases;
  std::string library;
  /// False for names the alias step reported as not loadable; such classes
  /// stay visible to raw matching but never survive normalization.
  bool resolvable = true;
};

struct AliasMap {
  std::map<std::string, std::string, std::less<>> entries;
  std::set<std::string, std::less<>> invalid;
};

/// The universe of known classes, functions and aliases. Immutable after
/// load; all queries are const and safe to share across threads.
class Catalog {
public:
  using ClassMap = std::map<QualifiedName, ClassEntry, std::less<>>;
  using MethodIndex = std::map<std::string, TypeSet, std::less<>>;

  Catalog() = default;

  static Catalog from_json(const json &catalog_doc, const json &aliases_doc,
                           Vocabulary vocabulary = {})
  {
    Catalog cat;
    cat.vocabulary_ = std::move(vocabulary);
    cat.load_aliases(aliases_doc);
    cat.load_classes(catalog_doc);
    cat.load_functions(catalog_doc);
    cat.load_modules(catalog_doc);
    cat.build_method_index();
    return cat;
  }

  /// Reads both interchange files. An empty (zero-length) file counts as an
  /// empty document.
  static Catalog load(const std::filesystem::path &catalog_path,
                      const std::filesystem::path &aliases_path, Vocabulary vocabulary = {})
  {
    return from_json(read_document(catalog_path), read_document(aliases_path),
                     std::move(vocabulary));
  }

  static json read_document(const std::filesystem::path &path)
  {
    auto text = read_file(path);
    if (trim(text).empty())
      return json::object();
    try {
      return json::parse(text);
    } catch (const json::parse_error &e) {
      throw InputError("malformed JSON in " + path.string() + ": " + e.what());
    }
  }

  // -------------------------------------------------------------------------
  // Queries
  // -------------------------------------------------------------------------

  const ClassMap &classes() const noexcept { return classes_; }
  const MethodIndex &method_index() const noexcept { return method_index_; }
  const std::map<QualifiedName, std::string, std::less<>> &functions() const noexcept
  {
    return functions_;
  }
  const AliasMap &alias_map() const noexcept { return aliases_; }
  const Vocabulary &vocabulary() const noexcept { return vocabulary_; }
  const TypeSet &dangling_bases() const noexcept { return dangling_bases_; }

  const ClassEntry *find_class(std::string_view name) const
  {
    auto it = classes_.find(name);
    return it == classes_.end() ? nullptr : &it->second;
  }

  /// Canonical form of a type name, or nullopt when the name is invalid or
  /// unknown. Vocabulary names are their own canonical form; a leading
  /// `builtins.` is dropped.
  std::optional<QualifiedName> normalize(std::string_view name) const
  {
    name = strip_builtins(trim(name));
    if (!QualifiedName::valid(name))
      return std::nullopt;
    if (vocabulary_.contains(name))
      return QualifiedName(name);
    if (aliases_.invalid.contains(name))
      return std::nullopt;
    auto canonical = chase_alias(name);
    if (aliases_.invalid.contains(canonical))
      return std::nullopt;
    if (canonical != name)
      return QualifiedName(canonical);
    if (auto *entry = find_class(name); entry != nullptr && entry->resolvable)
      return QualifiedName(name);
    if (canonical_names_.contains(name))
      return QualifiedName(name);
    return std::nullopt;
  }

  std::optional<QualifiedName> normalize(const QualifiedName &name) const
  {
    return normalize(std::string_view(name.str()));
  }

  /// Functions are aliased through the same map; unknown names pass through.
  QualifiedName normalize_function(std::string_view name) const
  {
    auto canonical = chase_alias(trim(name));
    return QualifiedName(canonical);
  }

  bool is_module(std::string_view name) const { return modules_.contains(name); }

  TypeCategory classify(std::string_view name) const
  {
    name = strip_builtins(trim(name));
    if (vocabulary_.primitives.contains(name))
      return TypeCategory::Primitive;
    if (vocabulary_.none_names.contains(name))
      return TypeCategory::NoneType;
    if (vocabulary_.any_names.contains(name))
      return TypeCategory::Any;
    if (vocabulary_.builtins.contains(name))
      return TypeCategory::Builtin;
    auto canonical = normalize(name);
    bool has_class = canonical && find_class(canonical->str()) != nullptr;
    if (is_module(name) && !has_class)
      return TypeCategory::Module;
    if (canonical)
      return TypeCategory::UserClass;
    return TypeCategory::Unknown;
  }

  /// Reflexive-transitive closure of the bases relation. Unknown `sub` is
  /// never a subtype of anything; dangling bases are leaves.
  bool is_subtype(std::string_view sub, std::string_view sup) const
  {
    if (find_class(sub) == nullptr)
      return false;
    if (sub == sup)
      return true;
    return ancestors(sub).contains(sup);
  }

  /// Strict ancestors of `name` (everything reachable through bases, cycles
  /// tolerated).
  TypeSet ancestors(std::string_view name) const
  {
    TypeSet seen;
    std::deque<std::string_view> work{name};
    while (!work.empty()) {
      auto cur = work.front();
      work.pop_front();
      const auto *entry = find_class(cur);
      if (entry == nullptr)
        continue;
      for (const auto &base : entry->bases) {
        if (seen.insert(base).second)
          work.push_back(base.str());
      }
    }
    if (auto it = seen.find(name); it != seen.end())
      seen.erase(it);
    return seen;
  }

private:
  static std::string_view strip_builtins(std::string_view name)
  {
    constexpr std::string_view prefix = "builtins.";
    if (name.starts_with(prefix) && name.size() > prefix.size())
      name.remove_prefix(prefix.size());
    return name;
  }

  /// Follows alias entries to a fixed point. A cycle resolves to its
  /// smallest member so every name on or leading into it agrees.
  std::string chase_alias(std::string_view name) const
  {
    std::vector<std::string> path{std::string(name)};
    while (true) {
      auto it = aliases_.entries.find(path.back());
      if (it == aliases_.entries.end() || it->second == path.back())
        return path.back();
      auto again = std::find(path.begin(), path.end(), it->second);
      if (again != path.end())
        return *std::min_element(again, path.end());
      path.push_back(it->second);
    }
  }

  static const json &array_field(const json &doc, const char *key, const std::string &where)
  {
    static const json empty = json::array();
    if (!doc.contains(key) || doc[key].is_null())
      return empty;
    if (!doc[key].is_array())
      throw InputError(where + ": field '" + key + "' must be an array");
    return doc[key];
  }

  static std::string string_field(const json &rec, const char *key, const std::string &where)
  {
    if (!rec.is_object() || !rec.contains(key) || !rec[key].is_string())
      throw InputError(where + ": missing or non-string field '" + key + "'");
    return rec[key].get<std::string>();
  }

  static QualifiedName name_field(const json &rec, const char *key, const std::string &where)
  {
    auto raw = string_field(rec, key, where);
    auto q = QualifiedName::parse(raw);
    if (!q)
      throw InputError(where + ": invalid qualified name '" + raw + "'");
    return *q;
  }

  void load_aliases(const json &doc)
  {
    if (!doc.is_object())
      throw InputError("aliases file: top level must be an object");
    const auto &entries = array_field(doc, "aliases", "aliases file");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      auto where = "aliases[" + std::to_string(i) + "]";
      auto alias = name_field(entries[i], "alias", where);
      auto canonical = name_field(entries[i], "canonical", where);
      auto [it, inserted] = aliases_.entries.emplace(alias.str(), canonical.str());
      if (!inserted && it->second != canonical.str())
        throw InputError(where + ": alias '" + alias.str() + "' maps to both '" + it->second +
                         "' and '" + canonical.str() + "'");
    }
    const auto &invalid = array_field(doc, "invalid", "aliases file");
    for (std::size_t i = 0; i < invalid.size(); ++i) {
      if (!invalid[i].is_string())
        throw InputError("invalid[" + std::to_string(i) + "]: must be a string");
      aliases_.invalid.insert(invalid[i].get<std::string>());
    }
    for (const auto &[alias, canonical] : aliases_.entries) {
      auto resolved = chase_alias(alias);
      if (!aliases_.invalid.contains(resolved))
        canonical_names_.insert(resolved);
    }
  }

  void load_classes(const json &doc)
  {
    if (!doc.is_object())
      throw InputError("catalog file: top level must be an object");
    const auto &records = array_field(doc, "classes", "catalog file");
    for (std::size_t i = 0; i < records.size(); ++i) {
      auto where = "classes[" + std::to_string(i) + "]";
      const auto &rec = records[i];
      auto raw = name_field(rec, "name", where);
      bool resolvable = !aliases_.invalid.contains(raw.str());
      QualifiedName canonical = resolvable ? QualifiedName(chase_alias(raw.str())) : raw;
      if (resolvable && aliases_.invalid.contains(canonical.str())) {
        resolvable = false;
        canonical = raw;
      }
      auto it = classes_.find(canonical);
      if (it == classes_.end()) {
        ClassEntry entry{canonical, {}, {}, std::string(canonical.library()), resolvable};
        it = classes_.emplace(canonical, std::move(entry)).first;
      }
      for (const auto &m : array_field(rec, "methods", where)) {
        if (!m.is_string())
          throw InputError(where + ": method names must be strings");
        it->second.methods.insert(m.get<std::string>());
      }
      for (const auto &b : array_field(rec, "bases", where)) {
        if (!b.is_string() || !QualifiedName::valid(b.get<std::string>()))
          throw InputError(where + ": base names must be qualified-name strings");
        it->second.bases.emplace(chase_alias(b.get<std::string>()));
      }
      all_names_.insert(raw.str());
    }
    for (auto &[name, entry] : classes_) {
      if (auto self = entry.bases.find(name); self != entry.bases.end())
        entry.bases.erase(self);
      for (const auto &base : entry.bases) {
        if (!classes_.contains(base))
          dangling_bases_.insert(base);
      }
    }
    if (!dangling_bases_.empty())
      log::debug("catalog.dangling_bases", {{"count", dangling_bases_.size()}});
  }

  void load_functions(const json &doc)
  {
    const auto &records = array_field(doc, "functions", "catalog file");
    for (std::size_t i = 0; i < records.size(); ++i) {
      auto where = "functions[" + std::to_string(i) + "]";
      const auto &rec = records[i];
      auto raw = name_field(rec, "name", where);
      std::string docstring;
      if (rec.contains("docstring") && !rec["docstring"].is_null()) {
        if (!rec["docstring"].is_string())
          throw InputError(where + ": 'docstring' must be a string or null");
        docstring = rec["docstring"].get<std::string>();
      }
      if (rec.contains("class") && !rec["class"].is_null() && !rec["class"].is_string())
        throw InputError(where + ": 'class' must be a string or null");
      auto name = normalize_function(raw.str());
      auto [it, inserted] = functions_.emplace(name, docstring);
      if (!inserted && it->second.empty())
        it->second = docstring;
      all_names_.insert(raw.str());
    }
  }

  void load_modules(const json &doc)
  {
    for (const auto &m : array_field(doc, "modules", "catalog file")) {
      if (!m.is_string())
        throw InputError("catalog file: module names must be strings");
      modules_.insert(m.get<std::string>());
    }
    for (const auto &[alias, canonical] : aliases_.entries) {
      all_names_.insert(alias);
      all_names_.insert(canonical);
    }
    for (const auto &name : all_names_) {
      for (auto pos = name.find('.'); pos != std::string::npos; pos = name.find('.', pos + 1)) {
        auto prefix = std::string_view(name).substr(0, pos);
        if (!classes_.contains(prefix) && !aliases_.entries.contains(prefix))
          modules_.emplace(prefix);
      }
    }
  }

  void build_method_index()
  {
    for (const auto &[name, entry] : classes_) {
      for (const auto &m : entry.methods)
        method_index_[m].insert(name);
    }
  }

  Vocabulary vocabulary_;
  AliasMap aliases_;
  std::set<std::string, std::less<>> canonical_names_;
  std::set<std::string, std::less<>> all_names_;
  std::set<std::string, std::less<>> modules_;
  ClassMap classes_;
  MethodIndex method_index_;
  TypeSet dangling_bases_;
  std::map<QualifiedName, std::string, std::less<>> functions_;
};

} // namespace typegen
