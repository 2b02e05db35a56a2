#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>

#include "typegen/catalog.hpp"
#include "typegen/common.hpp"

namespace testing {

namespace fs = std::filesystem;

inline fs::path fixture(const std::string &rel) { return fs::path(TYPEGEN_FIXTURES) / rel; }

/// Scratch directory removed when the object goes out of scope.
class TempDir {
public:
  TempDir()
  {
    static std::atomic<int> counter{0};
    auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = fs::temp_directory_path() /
            ("typegen-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir()
  {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const fs::path &path() const { return path_; }
  fs::path operator/(const std::string &rel) const { return path_ / rel; }

private:
  fs::path path_;
};

inline void write_text(const fs::path &path, const std::string &text)
{
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline typegen::Catalog running_example_catalog()
{
  return typegen::Catalog::load(fixture("running_example/catalog.json"),
                                fixture("running_example/aliases.json"));
}

/// Catalog from inline class specs: {name, methods, bases}.
struct ClassSpec {
  std::string name;
  std::vector<std::string> methods;
  std::vector<std::string> bases;
};

inline typegen::Catalog make_catalog(const std::vector<ClassSpec> &classes,
                                     const typegen::json &aliases = typegen::json::object(),
                                     const std::vector<std::string> &modules = {})
{
  typegen::json doc = {{"classes", typegen::json::array()}, {"functions", typegen::json::array()}};
  for (const auto &c : classes)
    doc["classes"].push_back({{"name", c.name}, {"methods", c.methods}, {"bases", c.bases}});
  if (!modules.empty())
    doc["modules"] = modules;
  return typegen::Catalog::from_json(doc, aliases);
}

} // namespace testing
