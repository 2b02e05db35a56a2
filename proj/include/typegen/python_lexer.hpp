#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace typegen::python {

class SyntaxError : public std::runtime_error {
public:
  SyntaxError(int line, const std::string &message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line)
  {
  }
  int line() const noexcept { return line_; }

private:
  int line_;
};

enum class TokenKind { Name, Number, String, Op, Newline, Indent, Dedent, End };

struct Token {
  TokenKind kind;
  std::string text;
  int line = 0;
  /// For strings: true when the literal carries a `b` prefix.
  bool bytes = false;
  /// For strings: true when the literal is an f-string.
  bool formatted = false;
};

/// Python 3 tokenizer producing NEWLINE/INDENT/DEDENT the way the reference
/// tokenizer does. Comments and blank lines produce no tokens.
class Lexer {
public:
  explicit Lexer(std::string_view source) : src_(source) {}

  std::vector<Token> run()
  {
    if (src_.starts_with("\xEF\xBB\xBF"))
      pos_ = 3;
    while (pos_ < src_.size()) {
      if (at_line_start_ && depth_ == 0) {
        if (!handle_indentation())
          continue;
      }
      lex_one();
    }
    if (depth_ > 0)
      throw SyntaxError(line_, "unexpected EOF inside brackets");
    if (!tokens_.empty() && tokens_.back().kind != TokenKind::Newline &&
        tokens_.back().kind != TokenKind::Dedent && tokens_.back().kind != TokenKind::Indent)
      push(TokenKind::Newline, "");
    while (indents_.size() > 1) {
      indents_.pop_back();
      push(TokenKind::Dedent, "");
    }
    push(TokenKind::End, "");
    return std::move(tokens_);
  }

private:
  void push(TokenKind kind, std::string text) { tokens_.push_back({kind, std::move(text), line_}); }

  char peek(std::size_t off = 0) const
  {
    return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
  }

  /// Measures the indentation of a new logical line. Returns false when the
  /// line is blank or comment-only (it has been consumed).
  bool handle_indentation()
  {
    std::size_t col = 0;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ')
        ++col;
      else if (c == '\t')
        col = (col / 8 + 1) * 8;
      else if (c == '\f')
        col = 0;
      else
        break;
      ++pos_;
    }
    if (pos_ >= src_.size())
      return false;
    char c = src_[pos_];
    if (c == '#' || c == '\n' || c == '\r' || (c == '\\' && is_newline_at(pos_ + 1))) {
      if (c == '#')
        skip_comment();
      if (c == '\\') {
        ++pos_;
        consume_newline();
        return false;
      }
      consume_newline();
      return false;
    }
    at_line_start_ = false;
    if (col > indents_.back()) {
      indents_.push_back(col);
      push(TokenKind::Indent, "");
    } else {
      while (col < indents_.back()) {
        indents_.pop_back();
        push(TokenKind::Dedent, "");
      }
      if (col != indents_.back())
        throw SyntaxError(line_, "unindent does not match any outer indentation level");
    }
    return true;
  }

  bool is_newline_at(std::size_t p) const
  {
    return p < src_.size() && (src_[p] == '\n' || src_[p] == '\r');
  }

  void consume_newline()
  {
    if (peek() == '\r')
      ++pos_;
    if (peek() == '\n')
      ++pos_;
    ++line_;
    at_line_start_ = true;
  }

  void skip_comment()
  {
    while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r')
      ++pos_;
  }

  static bool is_name_start(unsigned char c)
  {
    return std::isalpha(c) != 0 || c == '_' || c >= 0x80;
  }
  static bool is_name_char(unsigned char c)
  {
    return std::isalnum(c) != 0 || c == '_' || c >= 0x80;
  }

  void lex_one()
  {
    char c = src_[pos_];
    if (c == ' ' || c == '\t' || c == '\f') {
      ++pos_;
      return;
    }
    if (c == '#') {
      skip_comment();
      return;
    }
    if (c == '\\') {
      if (!is_newline_at(pos_ + 1))
        throw SyntaxError(line_, "unexpected character after line continuation");
      ++pos_;
      if (peek() == '\r')
        ++pos_;
      if (peek() == '\n')
        ++pos_;
      ++line_;
      return;
    }
    if (c == '\n' || c == '\r') {
      if (depth_ == 0) {
        if (!tokens_.empty() && tokens_.back().kind != TokenKind::Newline)
          push(TokenKind::Newline, "");
        consume_newline();
      } else {
        consume_newline();
        at_line_start_ = false;
      }
      return;
    }
    if (is_name_start(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && is_name_char(static_cast<unsigned char>(src_[pos_])))
        ++pos_;
      std::string_view word = src_.substr(start, pos_ - start);
      if (word.size() <= 3 && (peek() == '\'' || peek() == '"') && is_string_prefix(word)) {
        lex_string(word);
        return;
      }
      push(TokenKind::Name, std::string(word));
      return;
    }
    if (c == '\'' || c == '"') {
      lex_string("");
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      lex_number();
      return;
    }
    lex_operator();
  }

  static bool is_string_prefix(std::string_view w)
  {
    if (w.empty() || w.size() > 2)
      return false;
    std::string lower;
    for (char ch : w)
      lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    static constexpr std::string_view prefixes[] = {"r", "u", "b", "f", "br", "rb", "fr", "rf"};
    for (auto p : prefixes) {
      if (lower == p)
        return true;
    }
    return false;
  }

  void lex_string(std::string_view prefix)
  {
    bool raw = false;
    bool bytes = false;
    bool formatted = false;
    for (char ch : prefix) {
      char l = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      raw |= l == 'r';
      bytes |= l == 'b';
      formatted |= l == 'f';
    }
    int start_line = line_;
    char quote = src_[pos_];
    bool triple = peek(1) == quote && peek(2) == quote;
    pos_ += triple ? 3 : 1;
    std::string body;
    while (true) {
      if (pos_ >= src_.size())
        throw SyntaxError(start_line, "unterminated string literal");
      char ch = src_[pos_];
      if (ch == '\\') {
        if (pos_ + 1 < src_.size()) {
          if (src_[pos_ + 1] == '\n')
            ++line_;
          if (raw)
            body.push_back(ch);
          body.push_back(src_[pos_ + 1]);
          pos_ += 2;
          continue;
        }
        throw SyntaxError(start_line, "unterminated string literal");
      }
      if (ch == quote) {
        if (!triple) {
          ++pos_;
          break;
        }
        if (peek(1) == quote && peek(2) == quote) {
          pos_ += 3;
          break;
        }
      }
      if (ch == '\n' || ch == '\r') {
        if (!triple)
          throw SyntaxError(start_line, "unterminated string literal");
        if (ch == '\n')
          ++line_;
      }
      body.push_back(ch);
      ++pos_;
    }
    Token tok{TokenKind::String, std::move(body), start_line, bytes, formatted};
    tokens_.push_back(std::move(tok));
  }

  void lex_number()
  {
    std::size_t start = pos_;
    bool hex = peek() == '0' && (peek(1) == 'x' || peek(1) == 'X');
    while (pos_ < src_.size()) {
      char ch = src_[pos_];
      if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.') {
        ++pos_;
        if (!hex && (ch == 'e' || ch == 'E') && (peek() == '+' || peek() == '-'))
          ++pos_;
        continue;
      }
      break;
    }
    push(TokenKind::Number, std::string(src_.substr(start, pos_ - start)));
  }

  void lex_operator()
  {
    static constexpr std::string_view three[] = {"**=", "//=", ">>=", "<<=", "..."};
    static constexpr std::string_view two[] = {"->", ":=", "**", "//", "<<", ">>", "<=",
                                               ">=", "==", "!=", "+=", "-=", "*=", "/=",
                                               "%=", "&=", "|=", "^=", "@=", "<>"};
    static constexpr std::string_view one = "()[]{},:;.+-*/%|&^~<>=@";
    auto rest = src_.substr(pos_);
    for (auto op : three) {
      if (rest.starts_with(op)) {
        push(TokenKind::Op, std::string(op));
        pos_ += 3;
        return;
      }
    }
    for (auto op : two) {
      if (rest.starts_with(op)) {
        if (op == "<>")
          throw SyntaxError(line_, "invalid syntax '<>'");
        push(TokenKind::Op, std::string(op));
        pos_ += 2;
        return;
      }
    }
    char c = src_[pos_];
    if (one.find(c) != std::string_view::npos) {
      if (c == '(' || c == '[' || c == '{')
        ++depth_;
      else if (c == ')' || c == ']' || c == '}') {
        if (depth_ == 0)
          throw SyntaxError(line_, std::string("unmatched '") + c + "'");
        --depth_;
      }
      push(TokenKind::Op, std::string(1, c));
      ++pos_;
      return;
    }
    if (c == '!')
      throw SyntaxError(line_, "invalid character '!'");
    throw SyntaxError(line_, std::string("invalid character '") + c + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int depth_ = 0;
  bool at_line_start_ = true;
  std::vector<std::size_t> indents_{0};
  std::vector<Token> tokens_;
};

inline std::vector<Token> tokenize_python(std::string_view source) { return Lexer(source).run(); }

} // namespace typegen::python
