#pragma once

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "typegen/catalog.hpp"
#include "typegen/common.hpp"
#include "typegen/config.hpp"
#include "typegen/corpus.hpp"
#include "typegen/dataset.hpp"
#include "typegen/doc_index.hpp"
#include "typegen/duck_typer.hpp"
#include "typegen/eval.hpp"
#include "typegen/frontend.hpp"
#include "typegen/predictions.hpp"
#include "typegen/turtle_analysis.hpp"
#include "typegen/usage_map.hpp"

namespace typegen {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitInternal = 2;

inline constexpr std::string_view kDocIndexFormat = "typegen.doc_index";

// ---------------------------------------------------------------------------
// Stages, shared by the individual subcommands and `pipeline`.
// ---------------------------------------------------------------------------

/// Doc index file: the index plus the catalog documents it was built from, so
/// inference needs nothing else.
inline json build_doc_index_file(const std::filesystem::path &catalog_path,
                                 const std::filesystem::path &aliases_path, const Vocabulary &vocab)
{
  auto catalog_doc = Catalog::read_document(catalog_path);
  auto aliases_doc = Catalog::read_document(aliases_path);
  auto catalog = Catalog::from_json(catalog_doc, aliases_doc, vocab);
  auto index = build_index(catalog);
  json out = index.to_json();
  out["format"] = kDocIndexFormat;
  out["version"] = kFormatVersion;
  out["catalog"] = std::move(catalog_doc);
  out["aliases"] = std::move(aliases_doc);
  log::info("doc_index_built", {{"functions", index.records().size()},
                                {"tokens", index.postings().size()}});
  return out;
}

inline PredictionMap infer_from_index_file(const json &index_file, const Vocabulary &vocab)
{
  if (!index_file.is_object() || index_file.value("format", std::string()) != kDocIndexFormat)
    throw InputError("not a doc index file");
  auto catalog = Catalog::from_json(index_file.value("catalog", json::object()),
                                    index_file.value("aliases", json::object()), vocab);
  auto index = DocIndex::from_json(index_file);
  auto cleansed = cleanse_doc_types(infer_doc_types(index, catalog), catalog);
  PredictionMap out;
  for (const auto &[fn, types] : cleansed)
    add_prediction(out, {fn, types, "docstring", {}, std::nullopt});
  log::info("doc_types_inferred", {{"functions", out.size()}});
  return out;
}

struct AnalyzeOptions {
  int jobs = 1;
  bool fold = false;
  long budget = kDefaultInstructionBudget;
  long work_budget = kDefaultWorkBudget;
  std::filesystem::path dump_ir;
};

inline UsageMap run_analysis(const std::filesystem::path &corpus, const AnalyzeOptions &opts)
{
  CorpusOptions copts;
  copts.jobs = opts.jobs;
  copts.analysis.instruction_budget = opts.budget;
  copts.analysis.work_budget = opts.work_budget;
  auto usages = analyze_corpus(corpus, copts);
  if (!opts.dump_ir.empty()) {
    std::string listing;
    for (const auto &file : collect_python_files(corpus)) {
      try {
        auto script = parse_script(read_file(file), file.string());
        auto result = analyze_script_detailed(script, copts.analysis);
        listing += dump_analysis(script, result);
      } catch (const ParseFailure &e) {
        listing += "script " + file.string() + "\nparse failure: " + e.what() + "\n";
      }
    }
    atomic_write(opts.dump_ir, listing);
  }
  return opts.fold ? fold_derived(usages) : usages;
}

inline PredictionMap run_duck_typing(const UsageMap &usages, const Catalog &catalog, double threshold)
{
  auto predictions = duck_type_all(usages, catalog, {threshold});
  log::info("duck_typed", {{"paths", usages.records.size()}, {"predictions", predictions.size()}});
  return to_prediction_map(predictions);
}

// ---------------------------------------------------------------------------
// Command line
// ---------------------------------------------------------------------------

namespace cli_detail {

inline bool parse_level(const std::string &name, log::Level &level)
{
  static const std::map<std::string, log::Level> levels = {
      {"debug", log::Level::Debug}, {"info", log::Level::Info}, {"warn", log::Level::Warn},
      {"error", log::Level::Error}, {"off", log::Level::Off}};
  auto it = levels.find(name);
  if (it == levels.end())
    return false;
  level = it->second;
  return true;
}

inline std::string version_string()
{
  return "typegen " + std::string(kToolchainVersion) + " (format " + std::to_string(kFormatVersion) + ")";
}

} // namespace cli_detail

/// Runs one command line (args excludes the program name). Returns the exit
/// code: 0 success, 1 bad input, 2 internal failure.
inline int run(const std::vector<std::string> &args, std::ostream &out = std::cout,
               std::ostream &err = std::cerr)
{
  CLI::App app{"Labeled return-type data from docstrings and corpus duck typing", "typegen"};
  app.set_version_flag("--version", cli_detail::version_string());
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "debug, info, warn, error or off");

  // extract-catalog
  std::string ex_modules, ex_catalog, ex_aliases, ex_tool = "typegen-extract-catalog";
  auto *extract = app.add_subcommand("extract-catalog", "Run the introspection extractor and validate its output");
  extract->add_option("--modules", ex_modules, "File with one module name per line")->required();
  extract->add_option("--out-catalog", ex_catalog)->required();
  extract->add_option("--out-aliases", ex_aliases)->required();
  extract->add_option("--extractor", ex_tool, "Extractor command");

  // docs index / docs infer
  auto *docs = app.add_subcommand("docs", "Docstring type inference");
  docs->require_subcommand(1);
  std::string di_catalog, di_aliases, di_out;
  auto *docs_index = docs->add_subcommand("index", "Build the returns-text index");
  docs_index->add_option("--catalog", di_catalog)->required();
  docs_index->add_option("--aliases", di_aliases)->required();
  docs_index->add_option("--out", di_out)->required();
  std::string dn_index, dn_out;
  auto *docs_infer = docs->add_subcommand("infer", "Infer and cleanse docstring types");
  docs_infer->add_option("--index", dn_index)->required();
  docs_infer->add_option("--out", dn_out)->required();

  // analyze
  std::string an_corpus, an_out, an_dump;
  int an_jobs = 1;
  bool an_fold = false;
  long an_budget = kDefaultInstructionBudget;
  long an_work = kDefaultWorkBudget;
  auto *analyze = app.add_subcommand("analyze", "Collect method usages on API results across a corpus");
  analyze->add_option("--corpus", an_corpus)->required();
  analyze->add_option("--jobs", an_jobs)->check(CLI::PositiveNumber);
  analyze->add_flag("--fold-derived", an_fold, "Attribute calls on derived results to the root API path");
  analyze->add_option("--dump-ir", an_dump, "Write the annotated IR listing here");
  analyze->add_option("--budget", an_budget, "Instruction visits per file")->check(CLI::PositiveNumber);
  analyze->add_option("--work-budget", an_work, "Turtle-set elements written per file")->check(CLI::PositiveNumber);
  analyze->add_option("--out", an_out)->required();

  // ducktype
  std::string dt_usages, dt_catalog, dt_aliases, dt_out;
  double dt_threshold = kDefaultMajorityThreshold;
  auto *ducktype = app.add_subcommand("ducktype", "Match observed method sets against catalog classes");
  ducktype->add_option("--usages", dt_usages)->required();
  ducktype->add_option("--catalog", dt_catalog)->required();
  ducktype->add_option("--aliases", dt_aliases)->required();
  ducktype->add_option("--out", dt_out)->required();
  ducktype->add_option("--majority-threshold", dt_threshold)->check(CLI::Range(0.0, 1.0));

  // merge
  std::string mg_doc, mg_analysis, mg_out;
  auto *merge = app.add_subcommand("merge", "Merge docstring and analysis predictions into the dataset");
  merge->add_option("--doc", mg_doc)->required();
  merge->add_option("--analysis", mg_analysis)->required();
  merge->add_option("--out", mg_out)->required();

  // stats
  std::string st_pred, st_catalog, st_aliases, st_out;
  auto *stats = app.add_subcommand("stats", "Summary statistics of a dataset or prediction file");
  stats->add_option("--pred", st_pred)->required();
  stats->add_option("--catalog", st_catalog)->required();
  stats->add_option("--aliases", st_aliases);
  stats->add_option("--out", st_out, "Machine-readable output (default: <pred>.stats.json)");

  // eval
  std::string ev_pred, ev_gold, ev_catalog, ev_aliases, ev_out;
  auto *eval = app.add_subcommand("eval", "Score predictions against a gold file");
  eval->add_option("--pred", ev_pred)->required();
  eval->add_option("--gold", ev_gold)->required();
  eval->add_option("--catalog", ev_catalog)->required();
  eval->add_option("--aliases", ev_aliases)->required();
  eval->add_option("--out", ev_out)->required();

  // pipeline
  std::string pl_config, pl_catalog, pl_aliases, pl_corpus, pl_output;
  int pl_jobs = 1;
  bool pl_fold = false;
  double pl_threshold = kDefaultMajorityThreshold;
  long pl_budget = kDefaultInstructionBudget;
  long pl_work = kDefaultWorkBudget;
  auto *pipeline = app.add_subcommand("pipeline", "Index, infer, analyze, duck-type and merge");
  pipeline->add_option("--config", pl_config, "JSON pipeline configuration");
  auto *o_catalog = pipeline->add_option("--catalog", pl_catalog);
  auto *o_aliases = pipeline->add_option("--aliases", pl_aliases);
  auto *o_corpus = pipeline->add_option("--corpus", pl_corpus);
  auto *o_output = pipeline->add_option("--output-dir", pl_output);
  auto *o_jobs = pipeline->add_option("--jobs", pl_jobs)->check(CLI::PositiveNumber);
  auto *o_fold = pipeline->add_flag("--fold-derived", pl_fold);
  auto *o_threshold = pipeline->add_option("--majority-threshold", pl_threshold)->check(CLI::Range(0.0, 1.0));
  auto *o_budget = pipeline->add_option("--budget", pl_budget)->check(CLI::PositiveNumber);
  auto *o_work = pipeline->add_option("--work-budget", pl_work)->check(CLI::PositiveNumber);

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("typegen");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char *> argv;
  for (const auto &a : argv_storage)
    argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  log::Level level{};
  if (!cli_detail::parse_level(log_level, level)) {
    err << "unknown log level: " << log_level << "\n";
    return kExitInput;
  }
  log::threshold() = level;

  try {
    if (*extract) {
      std::filesystem::path modules = ex_modules;
      if (!std::filesystem::exists(modules))
        throw InputError("modules file not found: " + ex_modules);
      auto quote = [](const std::string &s) {
        std::string q = "'";
        for (char c : s)
          q += c == '\'' ? std::string("'\\''") : std::string(1, c);
        return q + "'";
      };
      std::string cmd = ex_tool + " --modules " + quote(ex_modules) + " --out-catalog " +
                        quote(ex_catalog) + " --out-aliases " + quote(ex_aliases);
      log::info("extractor_start", {{"command", cmd}});
      int status = std::system(cmd.c_str());
      if (status != 0)
        throw InputError("extractor failed (status " + std::to_string(status) + "): " + cmd);
      auto catalog = Catalog::load(ex_catalog, ex_aliases);
      out << "catalog: " << catalog.classes().size() << " classes, " << catalog.functions().size()
          << " functions, " << catalog.alias_map().entries.size() << " aliases\n";
    } else if (*docs_index) {
      write_json_file(di_out, build_doc_index_file(di_catalog, di_aliases, {}));
      out << "wrote " << di_out << "\n";
    } else if (*docs_infer) {
      auto predictions = infer_from_index_file(read_json_file(dn_index), {});
      write_json_file(dn_out, predictions_to_json(predictions));
      out << "docstring predictions: " << predictions.size() << "\n";
    } else if (*analyze) {
      auto usages = run_analysis(an_corpus, {an_jobs, an_fold, an_budget, an_work, an_dump});
      write_json_file(an_out, usages_to_json(usages));
      out << "files analyzed: " << usages.files_analyzed << ", failed: " << usages.files_failed
          << ", paths: " << usages.records.size() << "\n";
    } else if (*ducktype) {
      if (!(dt_threshold > 0.0 && dt_threshold < 1.0))
        throw InputError("--majority-threshold must lie strictly between 0 and 1");
      auto catalog = Catalog::load(dt_catalog, dt_aliases);
      auto predictions = run_duck_typing(load_usages(dt_usages), catalog, dt_threshold);
      write_json_file(dt_out, predictions_to_json(predictions));
      out << "analysis predictions: " << predictions.size() << "\n";
    } else if (*merge) {
      auto records = merge_sources(load_predictions(mg_doc), load_predictions(mg_analysis));
      atomic_write(mg_out, dataset_to_jsonl(records));
      out << "dataset records: " << records.size() << "\n";
    } else if (*stats) {
      json aliases_doc = st_aliases.empty() ? json::object() : Catalog::read_document(st_aliases);
      auto catalog = Catalog::from_json(Catalog::read_document(st_catalog), aliases_doc);
      std::vector<LabeledRecord> records;
      for (auto &[fn, p] : load_predictions(st_pred))
        records.push_back(p);
      auto s = compute_stats(records, catalog);
      std::string target = st_out.empty() ? st_pred + ".stats.json" : st_out;
      write_json_file(target, stats_to_json(s));
      out << render_stats(s);
    } else if (*eval) {
      auto catalog = Catalog::load(ev_catalog, ev_aliases);
      auto gold = load_gold(ev_gold, catalog);
      auto pred = load_predictions(ev_pred);
      auto metrics = compute_metrics(pred, gold, catalog);
      auto cm = confusion(pred, gold, catalog);
      write_json_file(ev_out, report_to_json(metrics, cm));
      out << render_report(metrics, cm);
    } else if (*pipeline) {
      PipelineConfig cfg;
      if (!pl_config.empty())
        cfg = load_config(pl_config);
      if (o_catalog->count())
        cfg.catalog_path = pl_catalog;
      if (o_aliases->count())
        cfg.aliases_path = pl_aliases;
      if (o_corpus->count())
        cfg.corpus_dir = pl_corpus;
      if (o_output->count())
        cfg.output_dir = pl_output;
      if (o_jobs->count())
        cfg.jobs = pl_jobs;
      if (o_fold->count())
        cfg.fold_derived = pl_fold;
      if (o_threshold->count())
        cfg.majority_threshold = pl_threshold;
      if (o_budget->count())
        cfg.instruction_budget = pl_budget;
      if (o_work->count())
        cfg.work_budget = pl_work;
      cfg.validate();

      const auto &dir = cfg.output_dir;
      auto index_file = build_doc_index_file(cfg.catalog_path, cfg.aliases_path, cfg.vocabulary);
      write_json_file(dir / "doc_index.json", index_file);
      auto doc_predictions = infer_from_index_file(index_file, cfg.vocabulary);
      write_json_file(dir / "doc_types.json", predictions_to_json(doc_predictions));

      auto usages = run_analysis(cfg.corpus_dir, {cfg.jobs, cfg.fold_derived, cfg.instruction_budget, cfg.work_budget, {}});
      write_json_file(dir / "usages.json", usages_to_json(usages));

      auto catalog = Catalog::load(cfg.catalog_path, cfg.aliases_path, cfg.vocabulary);
      auto analysis_predictions = run_duck_typing(usages, catalog, cfg.majority_threshold);
      write_json_file(dir / "analysis_types.json", predictions_to_json(analysis_predictions));

      auto records = merge_sources(doc_predictions, analysis_predictions);
      atomic_write(dir / "dataset.jsonl", dataset_to_jsonl(records));
      auto s = compute_stats(records, catalog);
      write_json_file(dir / "stats.json", stats_to_json(s));
      out << "files analyzed: " << usages.files_analyzed << ", failed: " << usages.files_failed << "\n";
      out << render_stats(s);
    }
  } catch (const InputError &e) {
    log::error("input_error", {{"error", e.what()}});
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const json::exception &e) {
    log::error("input_error", {{"error", e.what()}});
    err << "error: malformed input: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception &e) {
    log::error("internal_error", {{"error", e.what()}});
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

} // namespace typegen
