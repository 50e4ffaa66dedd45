#pragma once

// Character-level cursor shared by the Turtle, SPARQL and DL-expression
// readers. Tracks 1-based line/column in code points.

#include <cstddef>
#include <string>
#include <string_view>

#include "cssdh/error.hpp"

namespace cssdh::detail {

class TextCursor {
 public:
  /// Validates UTF-8 and strips a leading byte-order mark.
  explicit TextCursor(std::string_view text);

  bool at_end() const noexcept { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const noexcept {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  bool starts_with(std::string_view s) const noexcept { return text_.substr(pos_).starts_with(s); }
  char advance();
  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) advance();
  }
  std::size_t offset() const noexcept { return pos_; }
  std::string_view slice(std::size_t from) const { return text_.substr(from, pos_ - from); }

  /// Skips whitespace and `#` comments.
  void skip_space();

  struct Mark {
    std::size_t line;
    std::size_t column;
  };
  /// Position of the next character, or of the last one at end of input.
  Mark mark() const noexcept;

  [[noreturn]] void fail(const std::string& message) const { fail_at(mark(), message); }
  [[noreturn]] static void fail_at(Mark at, const std::string& message) {
    throw SyntaxError(ParseDiagnostic{at.line, at.column, message});
  }

  /// `<...>`; the IRI must be absolute.
  std::string read_iriref();
  /// Quoted string (short or long form, single or double quotes), escapes decoded.
  std::string read_string();
  /// Characters allowed in a prefix label or bare keyword.
  std::string read_word();
  /// Local part of a prefixed name, with `\x` escapes decoded. Trailing dots are left unread.
  std::string read_local_name();

  static bool is_name_start(char c) noexcept;
  static bool is_name_char(char c) noexcept;

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  Mark last_{1, 1};
};

void append_utf8(std::string& out, char32_t cp);

}  // namespace cssdh::detail
