#pragma once

#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "typegen/catalog.hpp"
#include "typegen/predictions.hpp"

namespace typegen {

using GoldMap = std::map<QualifiedName, TypeSet, std::less<>>;

/// Canonical spelling used for scoring. Names the catalog cannot resolve are
/// kept verbatim so third-party predictions still compare by name.
inline QualifiedName scoring_name(const QualifiedName &name, const Catalog &catalog)
{
  if (auto n = catalog.normalize(name))
    return *n;
  return name;
}

inline GoldMap gold_from_json(const json &doc, const Catalog &catalog)
{
  if (!doc.is_object() || !doc.contains("gold") || !doc["gold"].is_array())
    throw InputError("gold: missing 'gold' array");
  GoldMap out;
  const auto &list = doc["gold"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    auto p = prediction_from_json(list[i], "gold[" + std::to_string(i) + "]");
    if (p.types.empty())
      throw InputError("gold[" + std::to_string(i) + "]: 'types' must not be empty");
    auto &slot = out[catalog.normalize_function(p.function.str())];
    for (const auto &t : p.types)
      slot.insert(scoring_name(t, catalog));
  }
  return out;
}

inline GoldMap load_gold(const std::filesystem::path &path, const Catalog &catalog)
{
  try {
    return gold_from_json(read_json_file(path), catalog);
  } catch (const InputError &e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

/// Predictions with function and type names in scoring form.
inline GoldMap normalize_predictions(const PredictionMap &pred, const Catalog &catalog)
{
  GoldMap out;
  for (const auto &[fn, p] : pred) {
    auto &slot = out[catalog.normalize_function(fn.str())];
    for (const auto &t : p.types)
      slot.insert(scoring_name(t, catalog));
  }
  return out;
}

struct Metrics {
  /// Unset when undefined (nothing to divide by).
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  /// Recall against every gold function, predicted or not.
  std::optional<double> recall_all;
  long matched_methods = 0;
  long predicted_instances = 0;
  long correct_instances = 0;
  long gold_instances = 0;
  long recovered_instances = 0;
  long gold_instances_all = 0;
};

inline std::optional<double> ratio(long num, long den)
{
  if (den == 0)
    return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

/// Micro type-level precision and recall over functions present in both maps.
inline Metrics compute_metrics(const GoldMap &pred, const GoldMap &gold)
{
  Metrics m;
  for (const auto &[fn, g] : gold)
    m.gold_instances_all += static_cast<long>(g.size());
  for (const auto &[fn, p] : pred) {
    auto it = gold.find(fn);
    if (it == gold.end())
      continue;
    const auto &g = it->second;
    ++m.matched_methods;
    m.predicted_instances += static_cast<long>(p.size());
    m.gold_instances += static_cast<long>(g.size());
    for (const auto &t : p)
      if (g.contains(t))
        ++m.correct_instances;
    for (const auto &t : g)
      if (p.contains(t))
        ++m.recovered_instances;
  }
  if (m.matched_methods > 0) {
    m.precision = ratio(m.correct_instances, m.predicted_instances);
    m.recall = ratio(m.recovered_instances, m.gold_instances);
  }
  m.recall_all = ratio(m.recovered_instances, m.gold_instances_all);
  if (m.precision && m.recall) {
    double s = *m.precision + *m.recall;
    m.f1 = s == 0.0 ? 0.0 : 2.0 * *m.precision * *m.recall / s;
  }
  return m;
}

inline Metrics compute_metrics(const PredictionMap &pred, const GoldMap &gold, const Catalog &catalog)
{
  return compute_metrics(normalize_predictions(pred, catalog), gold);
}

struct ConfusionMatrix {
  std::map<std::pair<TypeCategory, TypeCategory>, long> cells; // (gold, predicted)
  long class_class_correct = 0;
  long pairs = 0;

  long cell(TypeCategory gold, TypeCategory predicted) const
  {
    auto it = cells.find({gold, predicted});
    return it == cells.end() ? 0 : it->second;
  }
};

/// Pairs each predicted type of a shared function with the same gold type
/// when present, otherwise with the first gold type by name, and tallies the
/// categories. Exact user-class matches are counted separately.
inline ConfusionMatrix confusion(const GoldMap &pred, const GoldMap &gold, const Catalog &catalog)
{
  ConfusionMatrix cm;
  for (const auto &[fn, p] : pred) {
    auto it = gold.find(fn);
    if (it == gold.end() || it->second.empty())
      continue;
    const auto &g = it->second;
    for (const auto &t : p) {
      const QualifiedName &partner = g.contains(t) ? t : *g.begin();
      auto gc = catalog.classify(partner.str());
      auto pc = catalog.classify(t.str());
      ++cm.pairs;
      if (gc == TypeCategory::UserClass && pc == TypeCategory::UserClass && partner == t)
        ++cm.class_class_correct;
      else
        ++cm.cells[{gc, pc}];
    }
  }
  return cm;
}

inline ConfusionMatrix confusion(const PredictionMap &pred, const GoldMap &gold, const Catalog &catalog)
{
  return confusion(normalize_predictions(pred, catalog), gold, catalog);
}

inline json optional_number(const std::optional<double> &v)
{
  return v ? json(*v) : json(nullptr);
}

inline json report_to_json(const Metrics &m, const ConfusionMatrix &cm)
{
  json cells = json::array();
  for (const auto &[key, n] : cm.cells)
    cells.push_back({{"gold", to_string(key.first)}, {"predicted", to_string(key.second)}, {"count", n}});
  return {{"metrics",
           {{"precision", optional_number(m.precision)},
            {"recall", optional_number(m.recall)},
            {"recall_shared", optional_number(m.recall)},
            {"recall_all", optional_number(m.recall_all)},
            {"f1", optional_number(m.f1)},
            {"matched_methods", m.matched_methods},
            {"predicted_instances", m.predicted_instances},
            {"correct_instances", m.correct_instances},
            {"gold_instances", m.gold_instances},
            {"gold_instances_all", m.gold_instances_all}}},
          {"confusion",
           {{"cells", cells}, {"class_class_correct", cm.class_class_correct}, {"pairs", cm.pairs}}}};
}

/// Human-readable report: metrics line plus the category matrix with gold
/// categories as rows; the UserClass diagonal shows exact matches in
/// parentheses.
inline std::string render_report(const Metrics &m, const ConfusionMatrix &cm)
{
  auto num = [](const std::optional<double> &v) {
    if (!v)
      return std::string("n/a");
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << *v;
    return s.str();
  };
  std::ostringstream out;
  out << "precision " << num(m.precision) << "  recall " << num(m.recall) << "  f1 " << num(m.f1)
      << "  recall_all " << num(m.recall_all) << "  matched " << m.matched_methods << "\n";
  const TypeCategory axes[] = {TypeCategory::Primitive, TypeCategory::NoneType, TypeCategory::Any,
                               TypeCategory::Builtin,   TypeCategory::UserClass, TypeCategory::Module,
                               TypeCategory::Unknown};
  out << std::left << std::setw(11) << "gold\\pred";
  for (auto c : axes)
    out << std::right << std::setw(12) << to_string(c);
  out << "\n";
  for (auto g : axes) {
    out << std::left << std::setw(11) << to_string(g);
    for (auto p : axes) {
      std::string cell = std::to_string(cm.cell(g, p));
      if (g == TypeCategory::UserClass && p == TypeCategory::UserClass)
        cell += " (" + std::to_string(cm.class_class_correct) + ")";
      out << std::right << std::setw(12) << cell;
    }
    out << "\n";
  }
  return out.str();
}

} // namespace typegen
