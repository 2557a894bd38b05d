#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ledgerlint/address.hpp"
#include "ledgerlint/error.hpp"
#include "ledgerlint/numfmt.hpp"

namespace ledgerlint::formula {

enum class TokenKind {
  Number,
  Percent,
  String,
  Ref,
  Ident,
  Colon,
  Comma,
  LParen,
  RParen,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  Amp,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;     // source spelling; unquoted contents for String; upper case for Ident/Ref
  double number = 0.0;  // Number only
  CellAddress cell{};   // Ref only
  std::size_t offset = 0;
};

// Same limit spreadsheets apply; also bounds tree depth for the recursive
// printer and evaluator.
inline constexpr std::size_t kMaxFormulaLength = 8192;

namespace detail {

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

inline std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace detail

/// Splits a formula into tokens. The text must start with '='; offsets are
/// 0-based positions in the full text. A word shaped like an address (B12)
/// is a Ref unless a '(' follows it, in which case it is a function name.
/// Throws LexError on characters outside the formula alphabet ('$', '!', ...).
inline std::vector<Token> tokenize(std::string_view src) {
  if (src.empty() || src[0] != '=') throw LexError("formula must start with '='", 0);
  if (src.size() > kMaxFormulaLength) throw LexError("formula longer than 8192 characters", kMaxFormulaLength);
  std::vector<Token> out;
  std::size_t i = 1;
  const std::size_t n = src.size();
  auto push = [&](TokenKind k, std::size_t at, std::size_t len) {
    out.push_back({k, std::string(src.substr(at, len)), 0.0, {}, at});
  };

  while (i < n) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
      continue;
    }
    const std::size_t start = i;

    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
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
      const auto spelled = src.substr(start, i - start);
      auto v = parse_number(spelled);
      if (!v) throw LexError("malformed number '" + std::string(spelled) + "'", start);
      out.push_back({TokenKind::Number, std::string(spelled), *v, {}, start});
      if (i < n && (detail::ident_start(src[i]) || src[i] == '.')) throw LexError("unexpected character after number", i);
      continue;
    }

    if (c == '"') {
      std::string value;
      ++i;
      for (;;) {
        if (i >= n) throw LexError("unterminated string", start);
        if (src[i] == '"') {
          if (i + 1 < n && src[i + 1] == '"') {
            value += '"';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        value += src[i++];
      }
      out.push_back({TokenKind::String, std::move(value), 0.0, {}, start});
      continue;
    }

    if (detail::ident_start(c)) {
      while (i < n && detail::ident_char(src[i])) ++i;
      const auto word = src.substr(start, i - start);
      std::size_t j = i;
      while (j < n && (src[j] == ' ' || src[j] == '\t')) ++j;
      const bool called = j < n && src[j] == '(';
      if (!called) {
        if (auto cell = parse_address(word)) {
          out.push_back({TokenKind::Ref, cell->str(), 0.0, *cell, start});
          continue;
        }
      }
      out.push_back({TokenKind::Ident, detail::upper(word), 0.0, {}, start});
      continue;
    }

    auto two = [&](char next) { return i + 1 < n && src[i + 1] == next; };
    switch (c) {
      case '%': push(TokenKind::Percent, i, 1); break;
      case ':': push(TokenKind::Colon, i, 1); break;
      case ',': push(TokenKind::Comma, i, 1); break;
      case '(': push(TokenKind::LParen, i, 1); break;
      case ')': push(TokenKind::RParen, i, 1); break;
      case '+': push(TokenKind::Plus, i, 1); break;
      case '-': push(TokenKind::Minus, i, 1); break;
      case '*': push(TokenKind::Star, i, 1); break;
      case '/': push(TokenKind::Slash, i, 1); break;
      case '^': push(TokenKind::Caret, i, 1); break;
      case '&': push(TokenKind::Amp, i, 1); break;
      case '=': push(TokenKind::Eq, i, 1); break;
      case '<':
        if (two('>')) {
          push(TokenKind::Ne, i, 2);
          ++i;
        } else if (two('=')) {
          push(TokenKind::Le, i, 2);
          ++i;
        } else {
          push(TokenKind::Lt, i, 1);
        }
        break;
      case '>':
        if (two('=')) {
          push(TokenKind::Ge, i, 2);
          ++i;
        } else {
          push(TokenKind::Gt, i, 1);
        }
        break;
      default:
        throw LexError(std::string("illegal character '") + c + "'", i);
    }
    ++i;
  }
  out.push_back({TokenKind::End, "", 0.0, {}, n});
  return out;
}

}  // namespace ledgerlint::formula
