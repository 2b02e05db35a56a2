#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "typegen/catalog.hpp"
#include "typegen/common.hpp"
#include "typegen/qualified_name.hpp"

namespace typegen {

/// function -> candidate return types
using TypeMap = std::map<QualifiedName, TypeSet, std::less<>>;

namespace detail {

inline std::vector<std::string> docstring_lines(std::string_view doc)
{
  std::vector<std::string> lines;
  for (auto &line : split(doc, '\n')) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    std::string expanded;
    for (char c : line) {
      if (c == '\t')
        expanded.append(8 - expanded.size() % 8, ' ');
      else
        expanded.push_back(c);
    }
    lines.push_back(std::move(expanded));
  }
  return lines;
}

inline std::size_t indent_of(std::string_view line)
{
  std::size_t n = 0;
  while (n < line.size() && line[n] == ' ')
    ++n;
  return n;
}

inline bool is_blank(std::string_view line) { return trim(line).empty(); }

/// A line made only of '-' or '=' (at least two), as used under section titles.
inline bool is_underline(std::string_view line)
{
  auto t = trim(line);
  if (t.size() < 2)
    return false;
  char c = t.front();
  if (c != '-' && c != '=')
    return false;
  return std::all_of(t.begin(), t.end(), [c](char x) { return x == c; });
}

inline bool is_section_title(const std::vector<std::string> &lines, std::size_t i)
{
  return i + 1 < lines.size() && !is_blank(lines[i]) && !is_underline(lines[i]) &&
         is_underline(lines[i + 1]);
}

/// Returns the text after a `:returns:`, `:return:` or `:rtype:` marker, or
/// nullopt when the line is not such a field.
inline std::optional<std::string_view> returns_field(std::string_view line)
{
  auto t = trim(line);
  for (std::string_view marker : {":returns:", ":return:", ":rtype:"}) {
    if (t.size() >= marker.size() && iequals(t.substr(0, marker.size()), marker))
      return trim(t.substr(marker.size()));
  }
  return std::nullopt;
}

inline bool is_identifier_char(unsigned char c)
{
  return std::isalnum(c) != 0 || c == '_' || c >= 0x80;
}

} // namespace detail

/// Extracts the return documentation from a raw docstring. Three markups
/// are recognised: an underlined `Returns` section, `:returns:`/`:return:`
/// fields and `:rtype:` fields. Everything else yields "".
inline std::string parse_returns_section(std::string_view docstring)
{
  using namespace detail;
  auto lines = docstring_lines(docstring);
  std::vector<std::string> pieces;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto title = trim(lines[i]);
    if ((title == "Returns" || title == "Return") && i + 1 < lines.size() &&
        is_underline(lines[i + 1])) {
      std::vector<std::string> body;
      std::size_t j = i + 2;
      for (; j < lines.size(); ++j) {
        if (is_section_title(lines, j) || returns_field(lines[j]))
          break;
        body.emplace_back(trim(lines[j]));
      }
      while (!body.empty() && body.back().empty())
        body.pop_back();
      auto first = std::find_if(body.begin(), body.end(), [](auto &s) { return !s.empty(); });
      body.erase(body.begin(), first);
      if (!body.empty())
        pieces.push_back(join(body, "\n"));
      i = j - 1;
      continue;
    }
    if (auto field = returns_field(lines[i])) {
      std::vector<std::string> body;
      if (!field->empty())
        body.emplace_back(*field);
      auto base_indent = indent_of(lines[i]);
      std::size_t j = i + 1;
      for (; j < lines.size(); ++j) {
        if (is_blank(lines[j]) || indent_of(lines[j]) <= base_indent)
          break;
        body.emplace_back(trim(lines[j]));
      }
      if (!body.empty())
        pieces.push_back(join(body, "\n"));
      i = j - 1;
    }
  }
  return join(pieces, "\n");
}

/// Lowercased identifier tokens, in order of appearance.
inline std::vector<std::string> tokenize(std::string_view text)
{
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    auto c = static_cast<unsigned char>(text[i]);
    if (detail::is_identifier_char(c) && std::isdigit(c) == 0) {
      std::size_t j = i;
      while (j < text.size() && detail::is_identifier_char(static_cast<unsigned char>(text[j])))
        ++j;
      tokens.push_back(to_lower(text.substr(i, j - i)));
      i = j;
    } else if (detail::is_identifier_char(c)) {
      // numbers and other digit-led runs are not identifiers
      while (i < text.size() && detail::is_identifier_char(static_cast<unsigned char>(text[i])))
        ++i;
    } else {
      ++i;
    }
  }
  return tokens;
}

struct FunctionDocRecord {
  QualifiedName function;
  std::string returns_text;
  TypeSet inferred_types;
};

/// Inverted index from lowercased return-text tokens to the functions whose
/// return documentation contains them.
class DocIndex {
public:
  using Postings = std::map<std::string, TypeSet, std::less<>>;
  using Records = std::map<QualifiedName, FunctionDocRecord, std::less<>>;

  void add(FunctionDocRecord record)
  {
    for (auto &token : tokenize(record.returns_text))
      postings_[token].insert(record.function);
    auto key = record.function;
    records_.insert_or_assign(std::move(key), std::move(record));
  }

  const TypeSet *lookup(std::string_view token) const
  {
    auto it = postings_.find(to_lower(token));
    return it == postings_.end() ? nullptr : &it->second;
  }

  const Postings &postings() const noexcept { return postings_; }
  const Records &records() const noexcept { return records_; }
  bool empty() const noexcept { return records_.empty(); }

  json to_json() const
  {
    json recs = json::array();
    for (const auto &[name, rec] : records_)
      recs.push_back({{"function", name.str()}, {"returns_text", rec.returns_text}});
    json post = json::object();
    for (const auto &[token, fns] : postings_)
      post[token] = to_strings(fns);
    return {{"records", recs}, {"postings", post}};
  }

  /// Rebuilds from `to_json` output; postings are recomputed from the records
  /// so a hand-edited file cannot desynchronise them.
  static DocIndex from_json(const json &doc)
  {
    DocIndex index;
    if (!doc.is_object() || !doc.contains("records") || !doc["records"].is_array())
      throw InputError("doc index: missing 'records' array");
    for (const auto &rec : doc["records"]) {
      if (!rec.is_object() || !rec.contains("function") || !rec["function"].is_string() ||
          !rec.contains("returns_text") || !rec["returns_text"].is_string())
        throw InputError("doc index: malformed record " + rec.dump());
      index.add({QualifiedName(rec["function"].get<std::string>()),
                 rec["returns_text"].get<std::string>(),
                 {}});
    }
    return index;
  }

private:
  Postings postings_;
  Records records_;
};

inline DocIndex build_index(const Catalog &catalog)
{
  DocIndex index;
  for (const auto &[name, docstring] : catalog.functions()) {
    if (trim(docstring).empty())
      continue;
    index.add({name, parse_returns_section(docstring), {}});
  }
  return index;
}

/// Raw (pre-cleansing) candidates: every catalog class whose short name is a
/// token of the return text, plus vocabulary words such as `bool` or `dict`.
inline TypeMap infer_doc_types(const DocIndex &index, const Catalog &catalog)
{
  TypeMap out;
  auto credit = [&](const TypeSet *functions, const QualifiedName &type) {
    if (functions == nullptr)
      return;
    for (const auto &fn : *functions)
      out[fn].insert(type);
  };
  for (const auto &[name, entry] : catalog.classes())
    credit(index.lookup(name.short_name()), name);
  const auto &vocab = catalog.vocabulary();
  for (const auto *words : {&vocab.primitives, &vocab.builtins, &vocab.none_names}) {
    for (const auto &word : *words) {
      if (QualifiedName::valid(word))
        credit(index.lookup(word), QualifiedName(word));
    }
  }
  return out;
}

/// Cleansing for one function's candidates. Steps, in order: canonicalise
/// through the alias map, drop unresolvable names, prefer same-library
/// classes over same-named classes elsewhere, and let a primitive or builtin
/// match evict user classes spelled the same way.
inline TypeSet cleanse_doc_candidates(const QualifiedName &function, const TypeSet &candidates,
                                      const Catalog &catalog)
{
  TypeSet kept;
  for (const auto &c : candidates) {
    if (auto n = catalog.normalize(c))
      kept.insert(*n);
  }

  std::map<std::string, std::vector<QualifiedName>, std::less<>> by_short;
  for (const auto &c : kept) {
    if (catalog.classify(c.str()) == TypeCategory::UserClass)
      by_short[std::string(c.short_name())].push_back(c);
  }
  auto library = function.library();
  for (const auto &[short_name, group] : by_short) {
    bool local = std::any_of(group.begin(), group.end(),
                             [&](const QualifiedName &c) { return c.library() == library; });
    if (!local)
      continue;
    for (const auto &c : group) {
      if (c.library() != library)
        kept.erase(c);
    }
  }

  std::vector<std::string> vocab_hits;
  for (const auto &c : kept) {
    auto cat = catalog.classify(c.str());
    if (cat == TypeCategory::Primitive || cat == TypeCategory::Builtin)
      vocab_hits.push_back(c.str());
  }
  if (!vocab_hits.empty()) {
    std::erase_if(kept, [&](const QualifiedName &c) {
      if (catalog.classify(c.str()) != TypeCategory::UserClass)
        return false;
      return std::any_of(vocab_hits.begin(), vocab_hits.end(),
                         [&](const std::string &v) { return iequals(v, c.short_name()); });
    });
  }
  return kept;
}

inline TypeMap cleanse_doc_types(const TypeMap &raw, const Catalog &catalog)
{
  TypeMap out;
  for (const auto &[function, candidates] : raw) {
    auto kept = cleanse_doc_candidates(function, candidates, catalog);
    if (!kept.empty())
      out.emplace(function, std::move(kept));
  }
  return out;
}

} // namespace typegen
