#include "sqlreward/sql/lexer.h"

#include <cctype>

#include "sqlreward/error.h"

namespace sqlreward::sql {
namespace {

bool is_ident_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c >= 0x80;
}

bool is_ident_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80;
}

}  // namespace

bool Token::is_word(std::string_view upper) const {
  if (kind != TokenKind::kWord || text.size() != upper.size()) return false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(text[i])) != upper[i]) return false;
  }
  return true;
}

std::pair<int, int> line_column(std::string_view source, std::size_t offset) {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i < offset && i < source.size(); ++i) {
    if (source[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

void throw_parse_error(std::string_view source, std::size_t offset,
                       const std::string& message) {
  auto [line, column] = line_column(source, offset);
  throw ParseError(message, offset, line, column);
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = src.size();

  auto push = [&](TokenKind kind, std::string text, std::size_t start) {
    out.push_back(Token{kind, std::move(text), start, i - start});
  };

  while (i < n) {
    const unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < n && src[i + 1] == '-') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      const std::size_t start = i;
      const std::size_t close = src.find("*/", i + 2);
      if (close == std::string_view::npos) {
        throw_parse_error(src, start, "unterminated comment");
      }
      i = close + 2;
      continue;
    }

    const std::size_t start = i;
    if (c == '\'' || c == '"' || c == '`' || c == '[') {
      const char close = c == '[' ? ']' : static_cast<char>(c);
      std::string value;
      ++i;
      bool closed = false;
      while (i < n) {
        if (src[i] == close) {
          if (close != ']' && i + 1 < n && src[i + 1] == close) {
            value.push_back(close);
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        value.push_back(src[i++]);
      }
      if (!closed) {
        throw_parse_error(src, start,
                          c == '\'' ? "unterminated string literal"
                                    : "unterminated quoted identifier");
      }
      push(c == '\'' ? TokenKind::kString : TokenKind::kQuotedIdentifier,
           std::move(value), start);
      continue;
    }

    if (std::isdigit(c) || (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      if (c == '0' && i + 1 < n && (src[i + 1] == 'x' || src[i + 1] == 'X')) {
        i += 2;
        while (i < n && std::isxdigit(static_cast<unsigned char>(src[i]))) ++i;
      } else {
        while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        if (i < n && src[i] == '.') {
          ++i;
          while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        }
        if (i < n && (src[i] == 'e' || src[i] == 'E')) {
          std::size_t j = i + 1;
          if (j < n && (src[j] == '+' || src[j] == '-')) ++j;
          if (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) {
            i = j;
            while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
          }
        }
      }
      if (i < n && is_ident_start(static_cast<unsigned char>(src[i]))) {
        throw_parse_error(src, start, "malformed number");
      }
      push(TokenKind::kNumber, std::string(src.substr(start, i - start)), start);
      continue;
    }

    if (is_ident_start(c)) {
      while (i < n && is_ident_char(static_cast<unsigned char>(src[i]))) ++i;
      push(TokenKind::kWord, std::string(src.substr(start, i - start)), start);
      continue;
    }

    static constexpr std::string_view kTwoChar[] = {"<=", ">=", "<>", "!=", "==",
                                                    "||", "<<", ">>"};
    bool matched = false;
    if (i + 1 < n) {
      for (std::string_view op : kTwoChar) {
        if (src.substr(i, 2) == op) {
          i += 2;
          push(TokenKind::kPunct, std::string(op), start);
          matched = true;
          break;
        }
      }
    }
    if (matched) continue;

    static constexpr std::string_view kOneChar = "(),.;+-*/%=<>&|~";
    if (kOneChar.find(static_cast<char>(c)) != std::string_view::npos) {
      ++i;
      push(TokenKind::kPunct, std::string(1, static_cast<char>(c)), start);
      continue;
    }
    throw_parse_error(src, start,
                      std::string("unexpected character '") + static_cast<char>(c) + "'");
  }
  out.push_back(Token{TokenKind::kEnd, "", n, 0});
  return out;
}

}  // namespace sqlreward::sql
