#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "ledgerlint/address.hpp"

namespace ledgerlint::formula {

enum class UnaryOp { Negate, Plus };

enum class BinaryOp { Add, Sub, Mul, Div, Pow, Concat, Eq, Ne, Lt, Le, Gt, Ge };

constexpr std::string_view symbol(UnaryOp op) noexcept { return op == UnaryOp::Negate ? "-" : "+"; }

constexpr std::string_view symbol(BinaryOp op) noexcept {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Pow: return "^";
    case BinaryOp::Concat: return "&";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Ne: return "<>";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
  }
  return "?";
}

// Binding strength, loosest first.
enum class Precedence { Comparison = 1, Concat, Additive, Multiplicative, Unary, Power, Primary };

constexpr Precedence precedence(BinaryOp op) noexcept {
  switch (op) {
    case BinaryOp::Pow: return Precedence::Power;
    case BinaryOp::Mul:
    case BinaryOp::Div: return Precedence::Multiplicative;
    case BinaryOp::Add:
    case BinaryOp::Sub: return Precedence::Additive;
    case BinaryOp::Concat: return Precedence::Concat;
    default: return Precedence::Comparison;
  }
}

struct Node;
// Trees are immutable once built, so subtrees are shared freely.
using NodePtr = std::shared_ptr<const Node>;

struct NumberLit {
  double value = 0.0;
};
// `12%`; `value` holds 12, evaluation divides by 100.
struct PercentLit {
  double value = 0.0;
};
struct TextLit {
  std::string value;
};
struct CellRef {
  CellAddress cell;
};
// Always stored normalized (top-left, bottom-right).
struct RangeRef {
  CellRange range;
};
struct Unary {
  UnaryOp op;
  NodePtr operand;
};
struct Binary {
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;
};
// Function call. Name is canonical upper case; omitted arguments between or
// after commas are EmptyArg nodes, never dropped.
struct Call {
  std::string name;
  std::vector<NodePtr> args;
};
struct EmptyArg {};

struct Node {
  std::variant<NumberLit, PercentLit, TextLit, CellRef, RangeRef, Unary, Binary, Call, EmptyArg> value;

  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(&value);
  }
  template <class T>
  bool is() const noexcept {
    return std::holds_alternative<T>(value);
  }
};

inline NodePtr make_node(auto alt) { return std::make_shared<const Node>(Node{std::move(alt)}); }
inline NodePtr number(double v) { return make_node(NumberLit{v}); }
inline NodePtr percent(double v) { return make_node(PercentLit{v}); }
inline NodePtr text(std::string v) { return make_node(TextLit{std::move(v)}); }
inline NodePtr ref(CellAddress a) { return make_node(CellRef{a}); }
inline NodePtr range(CellAddress a, CellAddress b) { return make_node(RangeRef{CellRange::normalized(a, b)}); }
inline NodePtr unary(UnaryOp op, NodePtr x) { return make_node(Unary{op, std::move(x)}); }
inline NodePtr binary(BinaryOp op, NodePtr l, NodePtr r) { return make_node(Binary{op, std::move(l), std::move(r)}); }
inline NodePtr call(std::string name, std::vector<NodePtr> args) { return make_node(Call{std::move(name), std::move(args)}); }
inline NodePtr empty_arg() { return make_node(EmptyArg{}); }

// Structural equality; number payloads compare bitwise-equal as doubles.
inline bool same_tree(const Node& a, const Node& b) {
  if (a.value.index() != b.value.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.value);
        if constexpr (std::is_same_v<T, NumberLit> || std::is_same_v<T, PercentLit> || std::is_same_v<T, TextLit>)
          return x.value == y.value;
        else if constexpr (std::is_same_v<T, CellRef>)
          return x.cell == y.cell;
        else if constexpr (std::is_same_v<T, RangeRef>)
          return x.range == y.range;
        else if constexpr (std::is_same_v<T, Unary>)
          return x.op == y.op && same_tree(*x.operand, *y.operand);
        else if constexpr (std::is_same_v<T, Binary>)
          return x.op == y.op && same_tree(*x.lhs, *y.lhs) && same_tree(*x.rhs, *y.rhs);
        else if constexpr (std::is_same_v<T, Call>) {
          if (x.name != y.name || x.args.size() != y.args.size()) return false;
          for (std::size_t i = 0; i < x.args.size(); ++i)
            if (!same_tree(*x.args[i], *y.args[i])) return false;
          return true;
        } else
          return true;
      },
      a.value);
}

// Visits every node depth-first, parents before children. The callback
// receives the node and its parent (null at the root).
template <class F>
void walk(const NodePtr& root, F&& fn, const Node* parent = nullptr) {
  if (!root) return;
  fn(*root, parent);
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Unary>)
          walk(x.operand, fn, root.get());
        else if constexpr (std::is_same_v<T, Binary>) {
          walk(x.lhs, fn, root.get());
          walk(x.rhs, fn, root.get());
        } else if constexpr (std::is_same_v<T, Call>) {
          for (const auto& a : x.args) walk(a, fn, root.get());
        }
      },
      root->value);
}

}  // namespace ledgerlint::formula
