#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <optional>
#include <string>
#include <system_error>
#include <thread>
#include <vector>

#include "typegen/common.hpp"
#include "typegen/frontend.hpp"
#include "typegen/turtle_analysis.hpp"

namespace typegen {

struct CorpusOptions {
  int jobs = 1;
  AnalysisOptions analysis;
};

/// All *.py files below `dir`, sorted by path so results never depend on
/// directory iteration order.
inline std::vector<std::filesystem::path> collect_python_files(const std::filesystem::path &dir)
{
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw InputError("corpus directory not found: " + dir.string());
  std::vector<fs::path> files;
  fs::recursive_directory_iterator it(dir, fs::directory_options::skip_permission_denied, ec);
  if (ec)
    throw InputError("cannot read corpus directory " + dir.string() + ": " + ec.message());
  for (fs::recursive_directory_iterator end; it != end; it.increment(ec)) {
    if (ec)
      throw InputError("cannot read corpus directory " + dir.string() + ": " + ec.message());
    if (it->is_regular_file(ec) && it->path().extension() == ".py")
      files.push_back(it->path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

/// Parses and analyzes one file. Unreadable or unparseable files count as
/// failed and never abort the caller.
inline UsageMap analyze_file(const std::filesystem::path &file, const AnalysisOptions &options)
{
  UsageMap failed;
  failed.files_failed = 1;
  std::string source;
  try {
    source = read_file(file);
  } catch (const InputError &e) {
    log::warn("file_unreadable", {{"path", file.string()}, {"error", e.what()}});
    return failed;
  }
  try {
    auto script = parse_script(source, file.string());
    auto usages = analyze_script(script, options);
    if (usages.files_truncated)
      log::warn("analysis_truncated", {{"path", file.string()},
                                       {"instruction_budget", options.instruction_budget},
                                       {"work_budget", options.work_budget}});
    return usages;
  } catch (const ParseFailure &e) {
    log::warn("parse_failure", {{"path", e.path()}, {"line", e.line()}, {"error", e.what()}});
    return failed;
  }
}

/// Analyzes every script of a corpus independently on `jobs` workers and
/// folds the per-file maps in path order.
inline UsageMap analyze_corpus(const std::filesystem::path &dir, const CorpusOptions &options = {})
{
  const auto files = collect_python_files(dir);
  std::vector<UsageMap> results(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++)
      results[i] = analyze_file(files[i], options.analysis);
  };
  const int jobs = std::max(1, options.jobs);
  if (jobs == 1 || files.size() < 2) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const auto n = std::min<std::size_t>(static_cast<std::size_t>(jobs), files.size());
    for (std::size_t i = 0; i < n; ++i)
      pool.emplace_back(worker);
    for (auto &t : pool)
      t.join();
  }
  UsageMap total;
  for (const auto &r : results)
    merge_into(total, r);
  log::info("corpus_analyzed", {{"files", files.size()},
                                {"failed", total.files_failed},
                                {"records", total.records.size()}});
  return total;
}

} // namespace typegen
