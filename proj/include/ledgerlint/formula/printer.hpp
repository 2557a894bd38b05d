#pragma once

#include <string>

#include "ledgerlint/formula/ast.hpp"
#include "ledgerlint/numfmt.hpp"

namespace ledgerlint::formula {

namespace detail {

inline Precedence node_precedence(const Node& n) {
  if (auto b = n.as<Binary>()) return precedence(b->op);
  if (n.is<Unary>()) return Precedence::Unary;
  return Precedence::Primary;
}

inline void print_to(std::string& out, const Node& n);

inline void print_wrapped(std::string& out, const Node& n, bool parens) {
  if (parens) out += '(';
  print_to(out, n);
  if (parens) out += ')';
}

inline void print_to(std::string& out, const Node& n) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, NumberLit>) {
          out += format_number(x.value);
        } else if constexpr (std::is_same_v<T, PercentLit>) {
          out += format_number(x.value);
          out += '%';
        } else if constexpr (std::is_same_v<T, TextLit>) {
          out += '"';
          for (char c : x.value) {
            if (c == '"') out += '"';
            out += c;
          }
          out += '"';
        } else if constexpr (std::is_same_v<T, CellRef>) {
          out += x.cell.str();
        } else if constexpr (std::is_same_v<T, RangeRef>) {
          out += x.range.str();
        } else if constexpr (std::is_same_v<T, Unary>) {
          out += symbol(x.op);
          print_wrapped(out, *x.operand, node_precedence(*x.operand) < Precedence::Unary);
        } else if constexpr (std::is_same_v<T, Binary>) {
          const Precedence p = precedence(x.op);
          const Precedence lp = node_precedence(*x.lhs);
          const Precedence rp = node_precedence(*x.rhs);
          if (x.op == BinaryOp::Pow) {
            // right-associative; the exponent may carry its own sign
            print_wrapped(out, *x.lhs, lp <= p);
            out += '^';
            print_wrapped(out, *x.rhs, rp < Precedence::Unary);
          } else {
            print_wrapped(out, *x.lhs, lp < p);
            out += symbol(x.op);
            print_wrapped(out, *x.rhs, rp <= p);
          }
        } else if constexpr (std::is_same_v<T, Call>) {
          out += x.name;
          out += '(';
          for (std::size_t i = 0; i < x.args.size(); ++i) {
            if (i) out += ',';
            print_to(out, *x.args[i]);
          }
          out += ')';
        }
        // EmptyArg prints as nothing
      },
      n.value);
}

}  // namespace detail

/// Canonical text: leading '=', upper-case names, no whitespace, only the
/// parentheses precedence requires. Number literals must be non-negative
/// (a negative literal reads back as a negation). A call whose only
/// argument is empty prints as "F()" and reads back with no arguments.
inline std::string print(const Node& n) {
  std::string out = "=";
  detail::print_to(out, n);
  return out;
}

inline std::string print(const NodePtr& n) { return print(*n); }

// Same as print() without the leading '='.
inline std::string print_expr(const Node& n) {
  std::string out;
  detail::print_to(out, n);
  return out;
}

}  // namespace ledgerlint::formula
