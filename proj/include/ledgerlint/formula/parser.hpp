#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ledgerlint/error.hpp"
#include "ledgerlint/formula/ast.hpp"
#include "ledgerlint/formula/lexer.hpp"

namespace ledgerlint::formula {

namespace detail {

// Recursive descent, one function per precedence tier:
//
//   comparison := concat (cmp concat)*
//   concat     := additive ('&' additive)*
//   additive   := term (('+'|'-') term)*
//   term       := unary (('*'|'/') unary)*
//   unary      := ('-'|'+') unary | power
//   power      := primary ('^' exponent)?
//   exponent   := ('-'|'+') exponent | power
//   primary    := NUMBER '%'? | STRING | REF (':' REF)? | IDENT '(' args ')' | '(' comparison ')'
//
// '^' binds tighter than unary minus, so -2^2 is -(2^2).
class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  NodePtr parse_formula() {
    if (peek().kind == TokenKind::End) throw ParseError("empty formula", peek().offset);
    auto node = comparison();
    if (peek().kind != TokenKind::End) {
      if (peek().kind == TokenKind::RParen) throw ParseError("unbalanced ')'", peek().offset);
      throw ParseError("unexpected '" + peek().text + "'", peek().offset);
    }
    return node;
  }

 private:
  // Counted per guarded frame (about two per parenthesis level).
  static constexpr int kMaxDepth = 512;

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool accept(TokenKind k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxDepth) throw ParseError("formula nested too deeply", p.peek().offset);
    }
    ~DepthGuard() { --p.depth_; }
  };

  NodePtr comparison() {
    auto lhs = concat();
    for (;;) {
      BinaryOp op;
      switch (peek().kind) {
        case TokenKind::Eq: op = BinaryOp::Eq; break;
        case TokenKind::Ne: op = BinaryOp::Ne; break;
        case TokenKind::Lt: op = BinaryOp::Lt; break;
        case TokenKind::Le: op = BinaryOp::Le; break;
        case TokenKind::Gt: op = BinaryOp::Gt; break;
        case TokenKind::Ge: op = BinaryOp::Ge; break;
        default: return lhs;
      }
      ++pos_;
      lhs = binary(op, lhs, concat());
    }
  }

  NodePtr concat() {
    auto lhs = additive();
    while (accept(TokenKind::Amp)) lhs = binary(BinaryOp::Concat, lhs, additive());
    return lhs;
  }

  NodePtr additive() {
    auto lhs = term();
    for (;;) {
      if (accept(TokenKind::Plus))
        lhs = binary(BinaryOp::Add, lhs, term());
      else if (accept(TokenKind::Minus))
        lhs = binary(BinaryOp::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    auto lhs = unary_expr();
    for (;;) {
      if (accept(TokenKind::Star))
        lhs = binary(BinaryOp::Mul, lhs, unary_expr());
      else if (accept(TokenKind::Slash))
        lhs = binary(BinaryOp::Div, lhs, unary_expr());
      else
        return lhs;
    }
  }

  NodePtr unary_expr() {
    DepthGuard guard(*this);
    if (accept(TokenKind::Minus)) return unary(UnaryOp::Negate, unary_expr());
    if (accept(TokenKind::Plus)) return unary(UnaryOp::Plus, unary_expr());
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept(TokenKind::Caret)) return binary(BinaryOp::Pow, base, exponent());
    return base;
  }

  NodePtr exponent() {
    DepthGuard guard(*this);
    if (accept(TokenKind::Minus)) return unary(UnaryOp::Negate, exponent());
    if (accept(TokenKind::Plus)) return unary(UnaryOp::Plus, exponent());
    return power();
  }

  NodePtr primary() {
    DepthGuard guard(*this);
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Number: {
        ++pos_;
        if (accept(TokenKind::Percent)) return percent(t.number);
        return number(t.number);
      }
      case TokenKind::String:
        ++pos_;
        return text(t.text);
      case TokenKind::Ref: {
        ++pos_;
        if (accept(TokenKind::Colon)) {
          if (peek().kind != TokenKind::Ref) throw ParseError("malformed range: expected a cell after ':'", peek().offset);
          return range(t.cell, next().cell);
        }
        return ref(t.cell);
      }
      case TokenKind::Ident: {
        ++pos_;
        if (!accept(TokenKind::LParen)) throw ParseError("unknown name '" + t.text + "'", t.offset);
        return call(t.text, arguments(t));
      }
      case TokenKind::LParen: {
        ++pos_;
        auto inner = comparison();
        if (!accept(TokenKind::RParen)) throw ParseError("missing ')'", peek().offset);
        return inner;
      }
      case TokenKind::End:
        throw ParseError("formula ends where an operand is expected", t.offset);
      case TokenKind::RParen:
        throw ParseError("unbalanced ')'", t.offset);
      case TokenKind::Percent:
        throw ParseError("'%' must follow a number", t.offset);
      case TokenKind::Colon:
        throw ParseError("malformed range: ':' without a starting cell", t.offset);
      default:
        throw ParseError("dangling operator before '" + t.text + "'", t.offset);
    }
  }

  // After '('. "F()" has no arguments; every comma opens a slot, and a slot
  // with nothing in it is an EmptyArg.
  std::vector<NodePtr> arguments(const Token& fn) {
    std::vector<NodePtr> args;
    if (accept(TokenKind::RParen)) return args;
    for (;;) {
      if (peek().kind == TokenKind::Comma || peek().kind == TokenKind::RParen)
        args.push_back(empty_arg());
      else
        args.push_back(comparison());
      if (accept(TokenKind::Comma)) continue;
      if (accept(TokenKind::RParen)) return args;
      if (peek().kind == TokenKind::End)
        throw ParseError("missing ')' to close " + fn.text + "(", peek().offset);
      throw ParseError("expected ',' or ')' in arguments of " + fn.text, peek().offset);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace detail

/// Parses formula text (leading '=') into an AST. Throws LexError or
/// ParseError carrying the offending column.
inline NodePtr parse(std::string_view text) { return detail::Parser(tokenize(text)).parse_formula(); }

}  // namespace ledgerlint::formula
