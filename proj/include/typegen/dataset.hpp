#pragma once

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "typegen/catalog.hpp"
#include "typegen/predictions.hpp"

namespace typegen {

/// A row of the final dataset. `source` is docstring, analysis or both.
using LabeledRecord = Prediction;

/// Unites the two prediction sources. Functions predicted by both get the
/// union of the types and an agreement flag (do the sets intersect?).
/// Output is sorted by function name.
inline std::vector<LabeledRecord> merge_sources(const PredictionMap &doc, const PredictionMap &analysis)
{
  std::vector<LabeledRecord> out;
  auto emit_single = [&](const Prediction &p, const char *source) {
    if (p.types.empty())
      return;
    out.push_back({p.function, p.types, source, {}, std::nullopt});
  };
  auto d = doc.begin();
  auto a = analysis.begin();
  while (d != doc.end() || a != analysis.end()) {
    if (a == analysis.end() || (d != doc.end() && d->first < a->first)) {
      emit_single(d->second, "docstring");
      ++d;
    } else if (d == doc.end() || a->first < d->first) {
      emit_single(a->second, "analysis");
      ++a;
    } else {
      const auto &dt = d->second.types;
      const auto &at = a->second.types;
      if (dt.empty() || at.empty()) {
        emit_single(dt.empty() ? a->second : d->second, dt.empty() ? "analysis" : "docstring");
      } else {
        TypeSet types = dt;
        types.insert(at.begin(), at.end());
        bool agree = std::any_of(dt.begin(), dt.end(), [&](const QualifiedName &t) { return at.contains(t); });
        out.push_back({d->first, std::move(types), "both", {}, agree});
      }
      ++d;
      ++a;
    }
  }
  return out;
}

inline json labeled_record_to_json(const LabeledRecord &r)
{
  return {{"function", r.function.str()},
          {"types", to_strings(r.types)},
          {"source", r.source},
          {"agreement", r.agreement ? json(*r.agreement) : json(nullptr)}};
}

/// One compact JSON record per line.
inline std::string dataset_to_jsonl(const std::vector<LabeledRecord> &records)
{
  std::string out;
  for (const auto &r : records) {
    out += labeled_record_to_json(r).dump();
    out += '\n';
  }
  return out;
}

struct DatasetStats {
  std::map<std::string, long> functions_per_source;
  std::map<std::string, long> types_per_source; // (function, type) pairs
  long functions = 0;
  long pairs = 0;
  long overlap_count = 0;
  long agreement_count = 0;
  std::map<TypeCategory, long> category_histogram;

  /// Mean number of types per function for `source`; 0 when it has none.
  double mean_types(const std::string &source) const
  {
    auto f = functions_per_source.find(source);
    if (f == functions_per_source.end() || f->second == 0)
      return 0.0;
    return static_cast<double>(types_per_source.at(source)) / static_cast<double>(f->second);
  }
};

inline DatasetStats compute_stats(const std::vector<LabeledRecord> &records, const Catalog &catalog)
{
  DatasetStats s;
  for (const auto &r : records) {
    ++s.functions;
    ++s.functions_per_source[r.source];
    s.types_per_source[r.source] += static_cast<long>(r.types.size());
    s.pairs += static_cast<long>(r.types.size());
    if (r.source == "both") {
      ++s.overlap_count;
      if (r.agreement.value_or(false))
        ++s.agreement_count;
    }
    for (const auto &t : r.types)
      ++s.category_histogram[catalog.classify(t.str())];
  }
  return s;
}

inline json stats_to_json(const DatasetStats &s)
{
  json sources = json::object();
  for (const auto &[source, n] : s.functions_per_source)
    sources[source] = {{"functions", n},
                       {"types", s.types_per_source.at(source)},
                       {"mean_types_per_function", s.mean_types(source)}};
  json histogram = json::object();
  for (auto c : kAllCategories) {
    auto it = s.category_histogram.find(c);
    histogram[std::string(to_string(c))] = it == s.category_histogram.end() ? 0 : it->second;
  }
  return {{"functions", s.functions},
          {"pairs", s.pairs},
          {"sources", sources},
          {"overlap", s.overlap_count},
          {"agreement", s.agreement_count},
          {"category_histogram", histogram}};
}

inline std::string render_stats(const DatasetStats &s)
{
  std::ostringstream out;
  out << std::left << std::setw(12) << "source" << std::right << std::setw(10) << "functions"
      << std::setw(10) << "types" << std::setw(12) << "mean" << "\n";
  for (const auto &[source, n] : s.functions_per_source)
    out << std::left << std::setw(12) << source << std::right << std::setw(10) << n
        << std::setw(10) << s.types_per_source.at(source) << std::setw(12) << std::fixed
        << std::setprecision(3) << s.mean_types(source) << "\n";
  out << std::left << std::setw(12) << "total" << std::right << std::setw(10) << s.functions
      << std::setw(10) << s.pairs << "\n";
  out << "overlap " << s.overlap_count << ", agreement " << s.agreement_count << "\n";
  out << "categories:";
  for (auto c : kAllCategories) {
    auto it = s.category_histogram.find(c);
    out << " " << to_string(c) << "=" << (it == s.category_histogram.end() ? 0 : it->second);
  }
  out << "\n";
  return out.str();
}

} // namespace typegen
