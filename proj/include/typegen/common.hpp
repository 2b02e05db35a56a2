#pragma once

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

namespace typegen {

using json = nlohmann::json;

inline constexpr std::string_view kToolchainVersion = "1.0.0";
inline constexpr int kFormatVersion = 1;

/// Bad or missing user input: a file that does not exist, a schema violation,
/// an invalid flag value. Maps to exit code 1 in the CLI.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// String helpers
// ---------------------------------------------------------------------------

inline std::string to_lower(std::string_view s)
{
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline std::vector<std::string> split(std::string_view s, char sep)
{
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.emplace_back(s.substr(start));
      return parts;
    }
    parts.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename Range>
std::string join(const Range &items, std::string_view sep)
{
  std::string out;
  bool first = true;
  for (const auto &item : items) {
    if (!first)
      out += sep;
    out += item;
    first = false;
  }
  return out;
}

inline std::string_view trim(std::string_view s)
{
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front()))
    s.remove_prefix(1);
  while (!s.empty() && is_space(s.back()))
    s.remove_suffix(1);
  return s;
}

inline bool iequals(std::string_view a, std::string_view b)
{
  if (a.size() != b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// File I/O
// ---------------------------------------------------------------------------

inline std::string read_file(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw InputError("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json read_json_file(const std::filesystem::path &path)
{
  auto text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    throw InputError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

/// Writes `content` to a sibling temp file and renames it over `path`, so
/// readers never observe a partially written output.
inline void atomic_write(const std::filesystem::path &path, std::string_view content)
{
  namespace fs = std::filesystem;
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw InputError("cannot write file: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
      throw InputError("short write: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw InputError("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                     ec.message());
  }
}

inline void write_json_file(const std::filesystem::path &path, const json &doc)
{
  atomic_write(path, doc.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Structured logging: one JSON object per line on stderr.
// ---------------------------------------------------------------------------

namespace log {

enum class Level { Debug = 0, Info = 1, Warn = 2, Error = 3, Off = 4 };

inline Level &threshold()
{
  static Level level = Level::Info;
  return level;
}

inline std::mutex &sink_mutex()
{
  static std::mutex m;
  return m;
}

inline const char *level_name(Level level)
{
  switch (level) {
  case Level::Debug: return "debug";
  case Level::Info: return "info";
  case Level::Warn: return "warn";
  case Level::Error: return "error";
  case Level::Off: break;
  }
  return "off";
}

inline void emit(Level level, std::string_view event, json fields = json::object())
{
  if (level < threshold())
    return;
  fields["level"] = level_name(level);
  fields["event"] = std::string(event);
  auto line = fields.dump();
  std::lock_guard lock(sink_mutex());
  std::cerr << line << '\n';
}

inline void debug(std::string_view event, json fields = json::object())
{
  emit(Level::Debug, event, std::move(fields));
}
inline void info(std::string_view event, json fields = json::object())
{
  emit(Level::Info, event, std::move(fields));
}
inline void warn(std::string_view event, json fields = json::object())
{
  emit(Level::Warn, event, std::move(fields));
}
inline void error(std::string_view event, json fields = json::object())
{
  emit(Level::Error, event, std::move(fields));
}

} // namespace log

} // namespace typegen
