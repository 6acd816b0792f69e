#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "twiglearn/tree.hpp"

namespace twiglearn::detail {

inline bool is_safe_label_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u) || c == '_' || c == '-' || c == '.' || c == ':' ||
         c == '@';
}

inline bool needs_quotes(std::string_view label) {
  if (label.empty() || label.front() == '.') return true;
  for (char c : label)
    if (!is_safe_label_char(c)) return true;
  return false;
}

inline std::string quote_label(std::string_view label) {
  if (!needs_quotes(label)) return std::string(label);
  std::string out = "\"";
  for (char c : label) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

// Cursor over a text buffer with position-aware errors.
class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  void advance(std::size_t n = 1) { pos_ += n; }
  std::size_t pos() const { return pos_; }

  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool consume(std::string_view token) {
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }
  void expect(std::string_view token) {
    if (!consume(token)) fail("expected '" + std::string(token) + "'");
  }

  // Double-quoted label with backslash escapes; cursor sits on the quote.
  std::string quoted() {
    std::string out;
    advance();
    while (!done() && peek() != '"') {
      if (peek() == '\\') {
        advance();
        if (done()) break;
      }
      out += peek();
      advance();
    }
    if (done()) fail("unterminated quoted label");
    advance();
    return out;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_));
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace twiglearn::detail
