#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "sgdb/error.hpp"

namespace sgdb {

enum class TokenKind { Ident, String, Star, Pipe, Comma, Equals, Arrow, LBrace, RBrace, Colon, Semi, Keyword, End };

inline std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Ident: return "identifier";
    case TokenKind::String: return "string";
    case TokenKind::Star: return "'*'";
    case TokenKind::Pipe: return "'|'";
    case TokenKind::Comma: return "','";
    case TokenKind::Equals: return "'='";
    case TokenKind::Arrow: return "'->'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::Colon: return "':'";
    case TokenKind::Semi: return "';'";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::End: return "end of input";
  }
  return "?";
}

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourcePos pos;
  /// Came from a quoted literal (only meaningful for Ident and String).
  bool quoted = false;

  friend bool operator==(const Token&, const Token&) = default;
};

inline constexpr std::array<std::string_view, 21> kKeywords = {
    "select", "project", "rename", "ijoin", "ljoin",  "rjoin", "ojoin",  "cross",  "as",     "njoin", "on",
    "create", "table",   "pk",     "fields", "drop",  "insert", "delete", "key",   "show",   "tables"};

inline bool is_keyword(std::string_view word) {
  for (auto k : kKeywords) {
    if (k == word) return true;
  }
  return false;
}

namespace detail {

/// Length of the UTF-8 sequence starting at s[i], or 0 when malformed.
inline std::size_t utf8_sequence_length(std::string_view s, std::size_t i) {
  auto b = static_cast<unsigned char>(s[i]);
  std::size_t len = b < 0x80 ? 1 : (b >> 5) == 0x6 ? 2 : (b >> 4) == 0xE ? 3 : (b >> 3) == 0x1E ? 4 : 0;
  if (len == 0 || i + len > s.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return 0;
  }
  if (len == 2 && b < 0xC2) return 0;  // overlong
  return len;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (at_end()) {
        out.push_back({TokenKind::End, "", pos_, false});
        return out;
      }
      out.push_back(next(out.empty() ? nullptr : &out.back()));
    }
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const { return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0'; }

  void advance() {
    std::size_t len = utf8_sequence_length(src_, i_);
    if (len == 0) throw SyntaxError(ErrorCode::LexError, pos_, "invalid UTF-8 byte");
    if (src_[i_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    i_ += len;
  }

  void skip_space() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '-' && peek(1) == '-') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  static bool is_word_byte(char c) {
    auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '.';
  }

  bool word_continues() const {
    char c = peek();
    if (is_word_byte(c)) return true;
    return c == '-' && peek(1) != '>' && peek(1) != '-';
  }

  static bool literal_position(const Token* prev) {
    if (!prev) return false;
    return prev->kind == TokenKind::Equals || prev->kind == TokenKind::Colon ||
           (prev->kind == TokenKind::Keyword && prev->text == "key");
  }

  Token next(const Token* prev) {
    const SourcePos start = pos_;
    auto single = [&](TokenKind kind) {
      Token t{kind, std::string(1, peek()), start, false};
      advance();
      return t;
    };
    char c = peek();
    switch (c) {
      case '|': return single(TokenKind::Pipe);
      case ',': return single(TokenKind::Comma);
      case '=': return single(TokenKind::Equals);
      case '*': return single(TokenKind::Star);
      case '{': return single(TokenKind::LBrace);
      case '}': return single(TokenKind::RBrace);
      case ':': return single(TokenKind::Colon);
      case ';': return single(TokenKind::Semi);
      case '\'':
      case '"': return quoted(start, literal_position(prev));
      default: break;
    }
    if (c == '-' && peek(1) == '>') {
      advance();
      advance();
      return {TokenKind::Arrow, "->", start, false};
    }
    if (is_word_byte(c) || c == '-') {
      std::size_t begin = i_;
      advance();
      while (!at_end() && word_continues()) advance();
      std::string word(src_.substr(begin, i_ - begin));
      return {is_keyword(word) ? TokenKind::Keyword : TokenKind::Ident, std::move(word), start, false};
    }
    if (utf8_sequence_length(src_, i_) == 0) throw SyntaxError(ErrorCode::LexError, start, "invalid UTF-8 byte");
    throw SyntaxError(ErrorCode::LexError, start, "illegal character '" + std::string(1, c) + "'");
  }

  Token quoted(SourcePos start, bool as_literal) {
    const char quote = peek();
    advance();
    std::string text;
    while (true) {
      if (at_end()) throw SyntaxError(ErrorCode::LexError, start, "unterminated string");
      char c = peek();
      if (c == quote) {
        advance();
        break;
      }
      if (c == '\\') {
        const SourcePos esc = pos_;
        advance();
        if (at_end()) throw SyntaxError(ErrorCode::LexError, start, "unterminated string");
        switch (peek()) {
          case '\\': text += '\\'; break;
          case '"': text += '"'; break;
          case '\'': text += '\''; break;
          case 'n': text += '\n'; break;
          case 't': text += '\t'; break;
          case 'r': text += '\r'; break;
          default: throw SyntaxError(ErrorCode::LexError, esc, "unknown escape sequence");
        }
        advance();
        continue;
      }
      std::size_t begin = i_;
      advance();
      text.append(src_.substr(begin, i_ - begin));
    }
    return {as_literal ? TokenKind::String : TokenKind::Ident, std::move(text), start, true};
  }

  std::string_view src_;
  std::size_t i_ = 0;
  SourcePos pos_;
};

}  // namespace detail

/// Splits `text` into tokens, ending with an End token. Quoted text in a value
/// position (after '=', ':' or `key`) is a String; elsewhere it is a quoted
/// identifier, which is how names with spaces such as "first author" are
/// written. `--` starts a comment that runs to the end of the line.
inline std::vector<Token> tokenize(std::string_view text) { return detail::Lexer(text).run(); }

}  // namespace sgdb
