#pragma once

#include <filesystem>
#include <string>

#include "typegen/catalog.hpp"
#include "typegen/common.hpp"
#include "typegen/duck_typer.hpp"
#include "typegen/turtle_analysis.hpp"

namespace typegen {

/// Settings for an end-to-end run. Relative paths in a config file are
/// resolved against the file's directory.
struct PipelineConfig {
  std::filesystem::path catalog_path;
  std::filesystem::path aliases_path;
  std::filesystem::path corpus_dir;
  std::filesystem::path output_dir = "out";
  int jobs = 1;
  bool fold_derived = false;
  double majority_threshold = kDefaultMajorityThreshold;
  long instruction_budget = kDefaultInstructionBudget;
  long work_budget = kDefaultWorkBudget;
  Vocabulary vocabulary;

  /// Throws InputError on out-of-range values or missing required paths.
  void validate() const
  {
    if (jobs < 1)
      throw InputError("config: jobs must be >= 1");
    if (!(majority_threshold > 0.0 && majority_threshold < 1.0))
      throw InputError("config: majority_threshold must lie strictly between 0 and 1");
    if (instruction_budget < 1)
      throw InputError("config: instruction_budget must be >= 1");
    if (work_budget < 1)
      throw InputError("config: work_budget must be >= 1");
    if (catalog_path.empty())
      throw InputError("config: catalog_path is required");
    if (aliases_path.empty())
      throw InputError("config: aliases_path is required");
    if (corpus_dir.empty())
      throw InputError("config: corpus_dir is required");
  }
};

namespace config_detail {

inline std::set<std::string, std::less<>> word_list(const json &v, const std::string &where)
{
  if (!v.is_array())
    throw InputError(where + " must be an array of strings");
  std::set<std::string, std::less<>> out;
  for (const auto &w : v) {
    if (!w.is_string())
      throw InputError(where + " must be an array of strings");
    out.insert(w.get<std::string>());
  }
  return out;
}

} // namespace config_detail

inline PipelineConfig config_from_json(const json &doc, const std::filesystem::path &base_dir)
{
  if (!doc.is_object())
    throw InputError("config: expected an object");
  PipelineConfig cfg;
  auto path_field = [&](const char *key, std::filesystem::path &slot) {
    if (!doc.contains(key))
      return;
    if (!doc[key].is_string())
      throw InputError(std::string("config: '") + key + "' must be a string");
    std::filesystem::path p = doc[key].get<std::string>();
    slot = p.is_absolute() ? p : base_dir / p;
  };
  path_field("catalog_path", cfg.catalog_path);
  path_field("aliases_path", cfg.aliases_path);
  path_field("corpus_dir", cfg.corpus_dir);
  path_field("output_dir", cfg.output_dir);
  try {
    cfg.jobs = doc.value("jobs", cfg.jobs);
    cfg.fold_derived = doc.value("fold_derived", cfg.fold_derived);
    cfg.majority_threshold = doc.value("majority_threshold", cfg.majority_threshold);
    cfg.instruction_budget = doc.value("instruction_budget", cfg.instruction_budget);
    cfg.work_budget = doc.value("work_budget", cfg.work_budget);
  } catch (const json::type_error &e) {
    throw InputError(std::string("config: ") + e.what());
  }
  if (doc.contains("vocabulary")) {
    const auto &v = doc["vocabulary"];
    if (!v.is_object())
      throw InputError("config: 'vocabulary' must be an object");
    if (v.contains("primitives"))
      cfg.vocabulary.primitives = config_detail::word_list(v["primitives"], "vocabulary.primitives");
    if (v.contains("builtins"))
      cfg.vocabulary.builtins = config_detail::word_list(v["builtins"], "vocabulary.builtins");
    if (v.contains("none"))
      cfg.vocabulary.none_names = config_detail::word_list(v["none"], "vocabulary.none");
    if (v.contains("any"))
      cfg.vocabulary.any_names = config_detail::word_list(v["any"], "vocabulary.any");
  }
  return cfg;
}

inline PipelineConfig load_config(const std::filesystem::path &path)
{
  try {
    return config_from_json(read_json_file(path), path.parent_path());
  } catch (const InputError &e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

} // namespace typegen
