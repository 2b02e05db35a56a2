#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "typegen/common.hpp"
#include "typegen/qualified_name.hpp"

namespace typegen {

/// One function's predicted return types, as exchanged between stages.
struct Prediction {
  QualifiedName function;
  TypeSet types;
  std::string source; // docstring | analysis | both | anything a third party writes
  /// Per-type match score (analysis only).
  std::map<std::string, long, std::less<>> scores;
  /// Set on merged records whose two sources overlap.
  std::optional<bool> agreement;
};

using PredictionMap = std::map<QualifiedName, Prediction, std::less<>>;

inline json prediction_to_json(const Prediction &p)
{
  json out = {{"function", p.function.str()}, {"types", to_strings(p.types)}, {"source", p.source}};
  if (!p.scores.empty()) {
    json scores = json::object();
    for (const auto &[t, s] : p.scores)
      scores[t] = s;
    out["scores"] = scores;
  }
  return out;
}

inline Prediction prediction_from_json(const json &rec, const std::string &where)
{
  if (!rec.is_object())
    throw InputError(where + ": expected an object");
  if (!rec.contains("function") || !rec["function"].is_string())
    throw InputError(where + ": missing string 'function'");
  if (!rec.contains("types") || !rec["types"].is_array())
    throw InputError(where + ": missing array 'types'");
  auto fn = QualifiedName::parse(rec["function"].get<std::string>());
  if (!fn)
    throw InputError(where + ": invalid function name '" + rec["function"].get<std::string>() + "'");
  Prediction p{*fn, {}, rec.value("source", std::string("unknown")), {}, std::nullopt};
  for (const auto &t : rec["types"]) {
    if (!t.is_string())
      throw InputError(where + ": type names must be strings");
    auto q = QualifiedName::parse(t.get<std::string>());
    if (!q)
      throw InputError(where + ": invalid type name '" + t.get<std::string>() + "'");
    p.types.insert(*q);
  }
  if (rec.contains("scores") && rec["scores"].is_object())
    for (const auto &[t, s] : rec["scores"].items())
      if (s.is_number_integer())
        p.scores[t] = s.get<long>();
  if (rec.contains("agreement") && rec["agreement"].is_boolean())
    p.agreement = rec["agreement"].get<bool>();
  return p;
}

/// `{"predictions": [...]}` document, sorted by function name.
inline json predictions_to_json(const PredictionMap &predictions)
{
  json list = json::array();
  for (const auto &[name, p] : predictions)
    list.push_back(prediction_to_json(p));
  return {{"predictions", list}};
}

/// Adds `p` to `into`, uniting with an existing record for the same function.
inline void add_prediction(PredictionMap &into, Prediction p)
{
  auto it = into.find(p.function);
  if (it == into.end()) {
    auto key = p.function;
    into.emplace(std::move(key), std::move(p));
    return;
  }
  it->second.types.insert(p.types.begin(), p.types.end());
  for (const auto &[t, s] : p.scores) {
    auto &slot = it->second.scores[t];
    slot = std::max(slot, s);
  }
}

/// Reads either a `{"predictions": [...]}` document or one JSON record per
/// line (the labeled dataset format).
inline PredictionMap parse_predictions(const std::string &text, const std::string &origin)
{
  PredictionMap out;
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos)
    return out;
  json doc;
  bool whole = false;
  try {
    doc = json::parse(text);
    whole = doc.is_object() && doc.contains("predictions");
  } catch (const json::parse_error &) {
    whole = false;
  }
  if (whole) {
    if (!doc["predictions"].is_array())
      throw InputError(origin + ": 'predictions' must be an array");
    const auto &list = doc["predictions"];
    for (std::size_t i = 0; i < list.size(); ++i)
      add_prediction(out, prediction_from_json(list[i], origin + ": predictions[" +
                                                            std::to_string(i) + "]"));
    return out;
  }
  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (trim(line).empty())
      continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error &e) {
      throw InputError(where + ": " + e.what());
    }
    add_prediction(out, prediction_from_json(rec, where));
  }
  return out;
}

inline PredictionMap load_predictions(const std::filesystem::path &path)
{
  return parse_predictions(read_file(path), path.string());
}

} // namespace typegen
