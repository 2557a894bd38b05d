#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ledgerlint/address.hpp"
#include "ledgerlint/date.hpp"
#include "ledgerlint/error.hpp"
#include "ledgerlint/formula/ast.hpp"
#include "ledgerlint/numfmt.hpp"
#include "ledgerlint/sheet.hpp"
#include "ledgerlint/types.hpp"

namespace ledgerlint::formula {

struct EvalOptions {
  // Mode handed to the financial functions (DB's rate rounding).
  PrecisionMode mode = PrecisionMode::Compat;
};

// Thrown inside evaluation to unwind to the cell boundary with an error value.
struct EvalSignal {
  ErrorValue error;
};

[[noreturn]] inline void fail(ErrorKind kind, std::string message) { throw EvalSignal{{kind, std::move(message)}}; }

// One value out of an argument: its cell when it came from a reference.
struct ArgValue {
  std::optional<CellAddress> cell;
  CellValue value;
};

class Evaluator;

namespace detail {
inline CellValue dispatch(const Evaluator& ev, const Call& call);
}

/// Evaluates formula trees against already-computed cell values. It never
/// evaluates other cells itself; evaluate_sheet() orders cells so that every
/// reference is resolved before it is read.
class Evaluator {
 public:
  using ValueMap = std::map<CellAddress, CellValue>;

  Evaluator(const Sheet& sheet, const ValueMap& values, EvalOptions options = {})
      : sheet_(sheet), values_(values), options_(options) {}

  const EvalOptions& options() const noexcept { return options_; }
  const Sheet& sheet() const noexcept { return sheet_; }

  // Total: every outcome, including library exceptions, becomes a CellValue.
  CellValue evaluate(const Node& node) const {
    try {
      return eval(node);
    } catch (const EvalSignal& s) {
      return s.error;
    } catch (const Error& e) {
      return ErrorValue{ErrorKind::Num, e.what()};
    } catch (const std::exception& e) {
      return ErrorValue{ErrorKind::Value, e.what()};
    }
  }

  // Value of a referenced cell; nullopt for a blank. Errors held by the
  // referenced cell surface as Propagated.
  std::optional<CellValue> resolve(CellAddress at) const {
    auto it = values_.find(at);
    if (it == values_.end()) {
      if (sheet_.find(at)) fail(ErrorKind::Propagated, at.str() + " has not been evaluated");
      return std::nullopt;
    }
    if (auto e = as_error(it->second)) {
      if (e->kind == ErrorKind::Propagated) fail(ErrorKind::Propagated, e->message);
      fail(ErrorKind::Propagated, "depends on " + at.str() + " (" + std::string(to_string(e->kind)) + ")");
    }
    return it->second;
  }

  // Scalar evaluation; throws EvalSignal on error values.
  CellValue eval(const Node& node) const {
    return std::visit([&](const auto& x) -> CellValue { return eval_alt(x); }, node.value);
  }

  // Values an argument contributes: every non-blank cell of a range in
  // row-major order, or the single scalar value.
  std::vector<ArgValue> flatten(const Node& node) const {
    std::vector<ArgValue> out;
    if (auto r = node.as<RangeRef>()) {
      for_each_cell(r->range, [&](CellAddress a) {
        if (auto v = resolve(a)) out.push_back({a, std::move(*v)});
      });
      return out;
    }
    if (auto c = node.as<CellRef>()) {
      if (auto v = resolve(c->cell)) out.push_back({c->cell, std::move(*v)});
      return out;
    }
    if (node.is<EmptyArg>()) return out;
    out.push_back({std::nullopt, eval(node)});
    return out;
  }

  // Calls `fn` on every address of `range` that holds a cell, row-major.
  template <class F>
  void for_each_cell(const CellRange& range, F&& fn) const {
    const auto& cells = sheet_.cells();
    if (range.area() <= static_cast<long long>(cells.size())) {
      for (int row = range.first.row; row <= range.last.row; ++row)
        for (int col = range.first.column; col <= range.last.column; ++col)
          if (cells.count({col, row})) fn(CellAddress{col, row});
    } else {
      for (auto it = cells.lower_bound(range.first); it != cells.end() && it->first.row <= range.last.row; ++it)
        if (range.contains(it->first)) fn(it->first);
    }
  }

  // Number in operator context: dates are serials, blanks 0, numeric text
  // converts, other text is #VALUE!.
  static double to_number(const CellValue& v) {
    if (auto d = std::get_if<double>(&v)) return *d;
    if (auto d = std::get_if<Date>(&v)) return to_serial(*d);
    if (auto s = std::get_if<std::string>(&v)) {
      if (auto n = parse_number(*s)) return *n;
      fail(ErrorKind::Value, "'" + *s + "' is not a number");
    }
    throw EvalSignal{std::get<ErrorValue>(v)};
  }

  static std::string to_text(const CellValue& v) {
    if (auto s = std::get_if<std::string>(&v)) return *s;
    return format_number(to_number(v));
  }

 private:
  CellValue eval_alt(const NumberLit& x) const { return x.value; }
  CellValue eval_alt(const PercentLit& x) const { return x.value / 100.0; }
  CellValue eval_alt(const TextLit& x) const { return x.value; }
  CellValue eval_alt(const CellRef& x) const {
    auto v = resolve(x.cell);
    return v ? *v : CellValue{0.0};
  }
  CellValue eval_alt(const RangeRef& x) const {
    fail(ErrorKind::Value, "range " + x.range.str() + " used where a single value is expected");
  }
  CellValue eval_alt(const EmptyArg&) const { fail(ErrorKind::Argument, "missing argument"); }
  CellValue eval_alt(const Call& x) const { return detail::dispatch(*this, x); }

  CellValue eval_alt(const Unary& x) const {
    const double v = to_number(eval(*x.operand));
    return x.op == UnaryOp::Negate ? -v : v;
  }

  CellValue eval_alt(const Binary& x) const {
    const CellValue lhs = eval(*x.lhs);
    const CellValue rhs = eval(*x.rhs);
    switch (x.op) {
      case BinaryOp::Concat: return to_text(lhs) + to_text(rhs);
      case BinaryOp::Eq:
      case BinaryOp::Ne:
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge: return compare(x.op, lhs, rhs);
      default: break;
    }
    const double a = to_number(lhs);
    const double b = to_number(rhs);
    double r = 0.0;
    switch (x.op) {
      case BinaryOp::Add: r = a + b; break;
      case BinaryOp::Sub: r = a - b; break;
      case BinaryOp::Mul: r = a * b; break;
      case BinaryOp::Div:
        if (b == 0.0) fail(ErrorKind::DivZero, "division by zero");
        r = a / b;
        break;
      case BinaryOp::Pow: r = std::pow(a, b); break;
      default: break;
    }
    if (!std::isfinite(r)) fail(ErrorKind::Num, "result is not a finite number");
    return r;
  }

  static CellValue compare(BinaryOp op, const CellValue& lhs, const CellValue& rhs) {
    // numbers (and dates) sort before text; text compares case-insensitively
    auto rank = [](const CellValue& v) { return std::holds_alternative<std::string>(v) ? 1 : 0; };
    int c = 0;
    if (rank(lhs) != rank(rhs)) {
      c = rank(lhs) < rank(rhs) ? -1 : 1;
    } else if (rank(lhs) == 1) {
      std::string a = std::get<std::string>(lhs), b = std::get<std::string>(rhs);
      for (auto& ch : a) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      for (auto& ch : b) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      c = a.compare(b) < 0 ? -1 : (a == b ? 0 : 1);
    } else {
      const double a = to_number(lhs), b = to_number(rhs);
      c = a < b ? -1 : (a > b ? 1 : 0);
    }
    bool r = false;
    switch (op) {
      case BinaryOp::Eq: r = c == 0; break;
      case BinaryOp::Ne: r = c != 0; break;
      case BinaryOp::Lt: r = c < 0; break;
      case BinaryOp::Le: r = c <= 0; break;
      case BinaryOp::Gt: r = c > 0; break;
      case BinaryOp::Ge: r = c >= 0; break;
      default: break;
    }
    return r ? 1.0 : 0.0;
  }

  const Sheet& sheet_;
  const ValueMap& values_;
  EvalOptions options_;
};

}  // namespace ledgerlint::formula

#include "ledgerlint/formula/functions.hpp"
