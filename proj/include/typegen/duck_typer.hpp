#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "typegen/catalog.hpp"
#include "typegen/predictions.hpp"
#include "typegen/usage_map.hpp"

namespace typegen {

inline constexpr double kDefaultMajorityThreshold = 0.5;

struct CandidateScore {
  QualifiedName class_name;
  long shared_count = 0;       // |F ∩ D|
  long class_method_count = 0; // |D|

  bool operator==(const CandidateScore &) const = default;
};

struct AnalysisPrediction {
  std::string api_path;
  QualifiedName function;
  std::vector<CandidateScore> candidates;
  TypeSet final_types;
  std::map<std::string, long, std::less<>> scores;
};

struct DuckTypeOptions {
  double majority_threshold = kDefaultMajorityThreshold;
};

/// Every class defining at least one observed method, ranked by the number
/// of observed methods it defines; ties prefer smaller classes, then names.
template <typename MethodSet>
std::vector<CandidateScore> score_candidates(const MethodSet &observed, const Catalog &catalog)
{
  std::map<QualifiedName, long, std::less<>> shared;
  for (const auto &m : observed) {
    auto it = catalog.method_index().find(m);
    if (it == catalog.method_index().end())
      continue;
    for (const auto &cls : it->second)
      ++shared[cls];
  }
  std::vector<CandidateScore> out;
  out.reserve(shared.size());
  for (const auto &[cls, count] : shared) {
    const auto *entry = catalog.find_class(cls.str());
    out.push_back({cls, count, entry ? static_cast<long>(entry->methods.size()) : 0});
  }
  std::sort(out.begin(), out.end(), [](const CandidateScore &a, const CandidateScore &b) {
    if (a.shared_count != b.shared_count)
      return a.shared_count > b.shared_count;
    if (a.class_method_count != b.class_method_count)
      return a.class_method_count < b.class_method_count;
    return a.class_name < b.class_name;
  });
  return out;
}

namespace cleansing {

/// Step 1: candidates matching the most observed methods.
inline TypeSet keep_best(const std::vector<CandidateScore> &candidates)
{
  TypeSet out;
  long best = 0;
  for (const auto &c : candidates)
    best = std::max(best, c.shared_count);
  for (const auto &c : candidates)
    if (c.shared_count == best && best > 0)
      out.insert(c.class_name);
  return out;
}

/// Step 2: a supertype covers its subtypes. Mutual subtypes (a cycle in a
/// noisy dump) keep only their smallest name.
inline TypeSet drop_subtypes(const TypeSet &types, const Catalog &catalog)
{
  TypeSet out;
  for (const auto &t : types) {
    bool covered = std::any_of(types.begin(), types.end(), [&](const QualifiedName &other) {
      if (other == t || !catalog.is_subtype(t.str(), other.str()))
        return false;
      return !catalog.is_subtype(other.str(), t.str()) || other < t;
    });
    if (!covered)
      out.insert(t);
  }
  return out;
}

/// Step 3: when more than `threshold` of the survivors share a supertype that
/// is not itself a survivor, keep only that supertype's subtypes.
inline TypeSet majority_supertype(const TypeSet &types, const Catalog &catalog, double threshold)
{
  if (types.size() < 2)
    return types;
  std::map<QualifiedName, long, std::less<>> votes;
  for (const auto &t : types)
    for (const auto &a : catalog.ancestors(t.str()))
      if (!types.contains(a))
        ++votes[a];
  const QualifiedName *best = nullptr;
  long best_votes = 0;
  for (const auto &[a, n] : votes) {
    if (n > best_votes) {
      best = &a;
      best_votes = n;
    }
  }
  if (best == nullptr || static_cast<double>(best_votes) <= threshold * static_cast<double>(types.size()))
    return types;
  TypeSet out;
  for (const auto &t : types)
    if (catalog.is_subtype(t.str(), best->str()))
      out.insert(t);
  return out;
}

/// Step 4: names that denote modules are not types.
inline TypeSet drop_modules(const TypeSet &types, const Catalog &catalog)
{
  TypeSet out;
  for (const auto &t : types)
    if (!catalog.is_module(t.str()))
      out.insert(t);
  return out;
}

/// Step 5: canonical names only; unresolvable names disappear.
inline TypeSet normalize_all(const TypeSet &types, const Catalog &catalog)
{
  TypeSet out;
  for (const auto &t : types)
    if (auto n = catalog.normalize(t))
      out.insert(*n);
  return out;
}

} // namespace cleansing

/// Applies the five analysis-cleansing steps in order.
inline TypeSet cleanse_analysis_types(const std::vector<CandidateScore> &candidates,
                                      const Catalog &catalog,
                                      double majority_threshold = kDefaultMajorityThreshold)
{
  auto types = cleansing::keep_best(candidates);
  types = cleansing::drop_subtypes(types, catalog);
  types = cleansing::majority_supertype(types, catalog, majority_threshold);
  types = cleansing::drop_modules(types, catalog);
  return cleansing::normalize_all(types, catalog);
}

/// Function name a return path stands for: "pandas.read_csv()" -> pandas.read_csv.
inline std::optional<QualifiedName> function_for_path(std::string_view api_path,
                                                      const Catalog &catalog)
{
  if (!api_path.ends_with("()"))
    return std::nullopt;
  api_path.remove_suffix(2);
  if (!QualifiedName::valid(api_path))
    return std::nullopt;
  return catalog.normalize_function(api_path);
}

/// Duck-types every return path of the usage map; ordered by path.
inline std::vector<AnalysisPrediction> duck_type_all(const UsageMap &usages, const Catalog &catalog,
                                                     const DuckTypeOptions &options = {})
{
  std::vector<AnalysisPrediction> out;
  for (const auto &[path, counts] : usages.records) {
    auto function = function_for_path(path, catalog);
    if (!function || counts.empty())
      continue;
    std::vector<std::string> observed;
    for (const auto &[m, c] : counts)
      observed.push_back(m);
    auto candidates = score_candidates(observed, catalog);
    auto final_types = cleanse_analysis_types(candidates, catalog, options.majority_threshold);
    if (final_types.empty())
      continue;
    AnalysisPrediction p{path, *function, std::move(candidates), std::move(final_types), {}};
    for (const auto &c : p.candidates) {
      auto canonical = catalog.normalize(c.class_name);
      if (canonical && p.final_types.contains(*canonical)) {
        auto &slot = p.scores[canonical->str()];
        slot = std::max(slot, c.shared_count);
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

/// Analysis predictions keyed by function; paths naming the same function
/// (after aliasing) are united.
inline PredictionMap to_prediction_map(const std::vector<AnalysisPrediction> &predictions)
{
  PredictionMap out;
  for (const auto &p : predictions)
    add_prediction(out, {p.function, p.final_types, "analysis", p.scores, std::nullopt});
  return out;
}

} // namespace typegen
