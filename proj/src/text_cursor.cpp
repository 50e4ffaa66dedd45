#include "text_cursor.hpp"

#include <string_view>

#include "cssdh/rdf.hpp"

namespace cssdh::detail {

namespace {

// Returns the byte offset of the first invalid sequence, or npos.
std::size_t find_invalid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return i;
    }
    if (i + len > s.size()) return i;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (cc & 0x3F);
    }
    const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000);
    if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
    i += len;
  }
  return std::string_view::npos;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

TextCursor::TextCursor(std::string_view text) : text_(text) {
  if (text_.starts_with("\xEF\xBB\xBF")) text_.remove_prefix(3);
  const auto bad = find_invalid_utf8(text_);
  if (bad != std::string_view::npos) {
    while (pos_ < bad) advance();
    fail("invalid UTF-8 byte sequence");
  }
}

char TextCursor::advance() {
  if (at_end()) return '\0';
  const char c = text_[pos_++];
  // Continuation bytes of a multi-byte code point do not move the column.
  if ((static_cast<unsigned char>(c) & 0xC0) == 0x80) return c;
  last_ = {line_, column_};
  if (c == '\n') {
    ++line_;
    column_ = 1;
  } else {
    ++column_;
  }
  return c;
}

TextCursor::Mark TextCursor::mark() const noexcept {
  if (at_end() && pos_ > 0) return last_;
  return {line_, column_};
}

void TextCursor::skip_space() {
  while (!at_end()) {
    const char c = peek();
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
    } else if (c == '#') {
      while (!at_end() && peek() != '\n') advance();
    } else {
      break;
    }
  }
}

std::string TextCursor::read_iriref() {
  const Mark start = mark();
  advance();  // '<'
  std::string iri;
  while (true) {
    if (at_end()) fail("unterminated IRI");
    const char c = peek();
    if (c == '>') break;
    if (c == '\n' || c == ' ' || c == '\t' || c == '<' || c == '"') fail("invalid character in IRI");
    if (c == '\\') {
      advance();
      const char kind = advance();
      const int digits = kind == 'u' ? 4 : kind == 'U' ? 8 : 0;
      if (digits == 0) fail("invalid escape in IRI");
      char32_t cp = 0;
      for (int i = 0; i < digits; ++i) {
        const int v = hex_value(peek());
        if (v < 0) fail("invalid \\u escape");
        advance();
        cp = (cp << 4) | static_cast<char32_t>(v);
      }
      append_utf8(iri, cp);
      continue;
    }
    iri += advance();
  }
  advance();  // '>'
  if (!rdf::is_absolute_iri(iri)) {
    fail_at(start, "unsupported Turtle feature: relative IRI <" + iri + "> (no base IRI support)");
  }
  return iri;
}

std::string TextCursor::read_string() {
  const char quote = peek();
  const bool long_form = peek(1) == quote && peek(2) == quote;
  advance(long_form ? 3 : 1);
  std::string out;
  while (true) {
    if (at_end()) fail("unterminated string literal");
    const char c = peek();
    if (long_form) {
      if (c == quote && peek(1) == quote && peek(2) == quote) {
        advance(3);
        return out;
      }
    } else {
      if (c == quote) {
        advance();
        return out;
      }
      if (c == '\n' || c == '\r') fail("line break in short string literal");
    }
    if (c != '\\') {
      out += advance();
      continue;
    }
    advance();
    const char e = peek();
    switch (e) {
      case 't': out += '\t'; break;
      case 'b': out += '\b'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      case 'f': out += '\f'; break;
      case '"': out += '"'; break;
      case '\'': out += '\''; break;
      case '\\': out += '\\'; break;
      case 'u':
      case 'U': {
        advance();
        const int digits = e == 'u' ? 4 : 8;
        char32_t cp = 0;
        for (int i = 0; i < digits; ++i) {
          const int v = hex_value(peek());
          if (v < 0) fail("invalid \\u escape in string");
          advance();
          cp = (cp << 4) | static_cast<char32_t>(v);
        }
        if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail("escape is not a Unicode scalar value");
        append_utf8(out, cp);
        continue;
      }
      default:
        fail(std::string("invalid escape sequence \\") + e);
    }
    advance();
  }
}

bool TextCursor::is_name_start(char c) noexcept {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || static_cast<unsigned char>(c) >= 0x80;
}

bool TextCursor::is_name_char(char c) noexcept {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '_' || c == '-';
}

std::string TextCursor::read_word() {
  std::string out;
  while (!at_end() && (is_name_char(peek()) || (peek() == '.' && is_name_char(peek(1))))) out += advance();
  return out;
}

std::string TextCursor::read_local_name() {
  static constexpr std::string_view kEscapable = "_~.-!$&'()*+,;=/?#@%";
  std::string out;
  while (!at_end()) {
    const char c = peek();
    if (is_name_char(c) || c == ':' || c == '%') {
      out += advance();
    } else if (c == '.' && (is_name_char(peek(1)) || peek(1) == ':' || peek(1) == '%' || peek(1) == '\\')) {
      out += advance();
    } else if (c == '\\' && kEscapable.find(peek(1)) != std::string_view::npos && peek(1) != '\0') {
      advance();
      out += advance();
    } else {
      break;
    }
  }
  return out;
}

}  // namespace cssdh::detail
