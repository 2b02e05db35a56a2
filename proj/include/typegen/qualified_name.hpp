#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "typegen/common.hpp"

namespace typegen {

/// A dot-joined name such as `pandas.core.frame.DataFrame`. Always has at
/// least one segment, no empty segments and no whitespace.
class QualifiedName {
public:
  /// Throws InputError when `dotted` is not a well-formed name.
  explicit QualifiedName(std::string_view dotted)
  {
    if (!valid(dotted))
      throw InputError("invalid qualified name: '" + std::string(dotted) + "'");
    rendered_ = std::string(dotted);
  }

  static std::optional<QualifiedName> parse(std::string_view dotted)
  {
    if (!valid(dotted))
      return std::nullopt;
    return QualifiedName(dotted);
  }

  static bool valid(std::string_view dotted)
  {
    if (dotted.empty())
      return false;
    std::size_t seg_len = 0;
    for (char c : dotted) {
      if (std::isspace(static_cast<unsigned char>(c)))
        return false;
      if (c == '.') {
        if (seg_len == 0)
          return false;
        seg_len = 0;
      } else {
        ++seg_len;
      }
    }
    return seg_len != 0;
  }

  const std::string &str() const noexcept { return rendered_; }

  std::vector<std::string_view> segments() const
  {
    std::vector<std::string_view> out;
    std::string_view s = rendered_;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
      if (i == s.size() || s[i] == '.') {
        out.push_back(s.substr(start, i - start));
        start = i + 1;
      }
    }
    return out;
  }

  /// Last segment.
  std::string_view short_name() const noexcept
  {
    std::string_view s = rendered_;
    auto pos = s.rfind('.');
    return pos == std::string_view::npos ? s : s.substr(pos + 1);
  }

  /// First segment; for library names this is the top-level package.
  std::string_view library() const noexcept
  {
    std::string_view s = rendered_;
    return s.substr(0, s.find('.'));
  }

  friend bool operator==(const QualifiedName &, const QualifiedName &) = default;
  friend std::strong_ordering operator<=>(const QualifiedName &a, const QualifiedName &b)
  {
    return a.rendered_.compare(b.rendered_) <=> 0;
  }
  friend bool operator==(const QualifiedName &a, std::string_view b) { return a.rendered_ == b; }
  friend std::strong_ordering operator<=>(const QualifiedName &a, std::string_view b)
  {
    return std::string_view(a.rendered_).compare(b) <=> 0;
  }

  friend std::ostream &operator<<(std::ostream &os, const QualifiedName &q)
  {
    return os << q.rendered_;
  }

private:
  std::string rendered_;
};

/// A set of type names; transparent so it can be probed with string_view.
using TypeSet = std::set<QualifiedName, std::less<>>;

inline TypeSet make_type_set(std::initializer_list<std::string_view> names)
{
  TypeSet out;
  for (auto n : names)
    out.emplace(n);
  return out;
}

inline std::vector<std::string> to_strings(const TypeSet &types)
{
  std::vector<std::string> out;
  out.reserve(types.size());
  for (const auto &t : types)
    out.push_back(t.str());
  return out;
}

} // namespace typegen
