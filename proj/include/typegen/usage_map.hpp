#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

#include "typegen/common.hpp"

namespace typegen {

/// Method name -> number of distinct call observations.
using MethodCounts = std::map<std::string, long, std::less<>>;

/// Corpus-wide map from provenance path (e.g. "pandas.read_csv()") to the
/// methods observed being called on values of that path.
struct UsageMap {
  std::map<std::string, MethodCounts, std::less<>> records;
  long files_analyzed = 0;
  long files_failed = 0;
  long files_truncated = 0;

  bool operator==(const UsageMap &) const = default;

  void observe(const std::string &path, const std::string &method, long count = 1)
  {
    records[path][method] += count;
  }

  std::set<std::string> methods(std::string_view path) const
  {
    std::set<std::string> out;
    if (auto it = records.find(path); it != records.end())
      for (const auto &[m, c] : it->second)
        out.insert(m);
    return out;
  }
};

/// Adds `b` into `into`: union of method sets, summed counts and counters.
inline void merge_into(UsageMap &into, const UsageMap &b)
{
  for (const auto &[path, counts] : b.records)
    for (const auto &[m, c] : counts)
      into.records[path][m] += c;
  into.files_analyzed += b.files_analyzed;
  into.files_failed += b.files_failed;
  into.files_truncated += b.files_truncated;
}

/// Associative and commutative, with the default-constructed map as identity.
inline UsageMap merge_usages(const UsageMap &a, const UsageMap &b)
{
  UsageMap out = a;
  merge_into(out, b);
  return out;
}

/// Root API path of a provenance path: everything up to and including the
/// first call marker. "pandas.read_csv().dropna()" -> "pandas.read_csv()".
inline std::string root_path(std::string_view path)
{
  auto pos = path.find("()");
  if (pos == std::string_view::npos)
    return std::string(path);
  return std::string(path.substr(0, pos + 2));
}

/// Folds observations made on derived paths into their root API path.
inline UsageMap fold_derived(const UsageMap &usages)
{
  UsageMap out;
  out.files_analyzed = usages.files_analyzed;
  out.files_failed = usages.files_failed;
  out.files_truncated = usages.files_truncated;
  for (const auto &[path, counts] : usages.records)
    for (const auto &[m, c] : counts)
      out.records[root_path(path)][m] += c;
  return out;
}

inline json usages_to_json(const UsageMap &usages)
{
  json records = json::array();
  for (const auto &[path, counts] : usages.records) {
    json methods = json::object();
    for (const auto &[m, c] : counts)
      methods[m] = c;
    records.push_back({{"path", path}, {"methods", methods}});
  }
  return {{"files_analyzed", usages.files_analyzed},
          {"files_failed", usages.files_failed},
          {"files_truncated", usages.files_truncated},
          {"records", records}};
}

inline UsageMap usages_from_json(const json &doc)
{
  if (!doc.is_object())
    throw InputError("usages: expected an object");
  UsageMap out;
  out.files_analyzed = doc.value("files_analyzed", 0L);
  out.files_failed = doc.value("files_failed", 0L);
  out.files_truncated = doc.value("files_truncated", 0L);
  const auto records = doc.value("records", json::array());
  if (!records.is_array())
    throw InputError("usages: 'records' must be an array");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto &r = records[i];
    const std::string where = "records[" + std::to_string(i) + "]";
    if (!r.is_object() || !r.contains("path") || !r["path"].is_string())
      throw InputError(where + ": missing string 'path'");
    const auto methods = r.value("methods", json::object());
    if (!methods.is_object())
      throw InputError(where + ": 'methods' must be an object");
    auto &counts = out.records[r["path"].get<std::string>()];
    for (const auto &[m, c] : methods.items()) {
      if (!c.is_number_integer() || c.get<long>() < 1)
        throw InputError(where + ": count for '" + m + "' must be a positive integer");
      counts[m] += c.get<long>();
    }
  }
  return out;
}

inline UsageMap load_usages(const std::filesystem::path &path)
{
  try {
    return usages_from_json(read_json_file(path));
  } catch (const InputError &e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

} // namespace typegen
