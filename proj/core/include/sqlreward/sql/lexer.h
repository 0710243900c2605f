#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sqlreward::sql {

enum class TokenKind {
  kWord,             // bare identifier or keyword
  kQuotedIdentifier, // "x", `x`, [x]
  kString,           // 'x'
  kNumber,
  kPunct,
  kEnd,
};

struct Token {
  TokenKind kind = TokenKind::kEnd;
  // Unescaped value for strings and quoted identifiers, raw text otherwise.
  std::string text;
  std::size_t offset = 0;
  std::size_t length = 0;

  bool is_word(std::string_view upper) const;
  bool is_punct(std::string_view p) const {
    return kind == TokenKind::kPunct && text == p;
  }
};

// Tokenizes `source`. The returned vector always ends with a kEnd token.
// Throws ParseError on unterminated literals/comments and stray characters.
std::vector<Token> tokenize(std::string_view source);

// 1-based line/column of a byte offset.
std::pair<int, int> line_column(std::string_view source, std::size_t offset);

[[noreturn]] void throw_parse_error(std::string_view source, std::size_t offset,
                                    const std::string& message);

}  // namespace sqlreward::sql
