#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ledgerlint/cashflow.hpp"
#include "ledgerlint/date.hpp"
#include "ledgerlint/daycount.hpp"
#include "ledgerlint/depreciation.hpp"
#include "ledgerlint/formula/evaluator.hpp"
#include "ledgerlint/rates.hpp"

namespace ledgerlint::formula {

// Argument access for one call, with error messages that name the parameter.
class CallArgs {
 public:
  CallArgs(const Evaluator& ev, const Call& call, const std::vector<std::string_view>& params)
      : ev_(ev), call_(call), params_(params) {}

  const Evaluator& evaluator() const noexcept { return ev_; }
  std::size_t size() const noexcept { return call_.args.size(); }

  bool omitted(std::size_t i) const { return i >= size() || call_.args[i]->is<EmptyArg>(); }

  std::string name(std::size_t i) const {
    const auto& p = params_.empty() ? std::string_view("arg") : params_[std::min(i, params_.size() - 1)];
    return call_.name + " argument '" + std::string(p) + "'";
  }

  [[noreturn]] void bad(std::size_t i, const std::string& what) const { fail(ErrorKind::Argument, name(i) + " " + what); }

  CellValue scalar(std::size_t i) const {
    if (omitted(i)) bad(i, "is required");
    const Node& n = *call_.args[i];
    if (n.is<RangeRef>()) bad(i, "expects a single value, not a range");
    return ev_.eval(n);
  }

  double number(std::size_t i) const {
    const CellValue v = scalar(i);
    if (auto d = std::get_if<double>(&v)) return *d;
    if (auto d = std::get_if<Date>(&v)) return to_serial(*d);
    if (auto s = std::get_if<std::string>(&v)) {
      if (auto n = parse_number(*s)) return *n;
      bad(i, "expects a number, got text '" + *s + "'");
    }
    throw EvalSignal{std::get<ErrorValue>(v)};
  }

  double number_or(std::size_t i, double fallback) const { return omitted(i) ? fallback : number(i); }

  int whole(std::size_t i) const {
    const double v = number(i);
    if (v != std::floor(v) || std::abs(v) > 1e9) bad(i, "expects a whole number, got " + format_number(v));
    return static_cast<int>(v);
  }

  // Truncates toward zero, as spreadsheets do for period counts.
  int truncated(std::size_t i) const {
    const double v = std::trunc(number(i));
    if (std::abs(v) > 1e9) bad(i, "is out of range");
    return static_cast<int>(v);
  }

  Date date(std::size_t i) const { return to_date(scalar(i), i); }

  Date to_date(const CellValue& v, std::size_t i) const {
    if (auto d = std::get_if<Date>(&v)) return *d;
    if (auto s = std::get_if<std::string>(&v)) {
      try {
        if (auto d = try_parse_iso_date(*s)) return *d;
      } catch (const ValidationError& e) {
        bad(i, e.what());
      }
      bad(i, "expects a date, got text '" + *s + "'");
    }
    if (auto n = std::get_if<double>(&v)) {
      const double serial = std::floor(*n);
      if (serial < 1.0 || serial > 1e6) bad(i, "serial " + format_number(*n) + " is not a supported date");
      try {
        return Date::from_serial(static_cast<std::int64_t>(serial) - kSerialEpochOffset);
      } catch (const ValidationError& e) {
        bad(i, e.what());
      }
    }
    throw EvalSignal{std::get<ErrorValue>(v)};
  }

  // Numbers drawn from arguments [from, size()): references contribute their
  // numeric and date cells and skip text; direct values must be numbers.
  std::vector<double> numbers(std::size_t from) const {
    std::vector<double> out;
    for (std::size_t i = from; i < size(); ++i) {
      const Node& n = *call_.args[i];
      if (n.is<EmptyArg>()) continue;
      if (n.is<RangeRef>() || n.is<CellRef>()) {
        for (const auto& a : ev_.flatten(n)) {
          if (auto d = std::get_if<double>(&a.value)) out.push_back(*d);
          else if (auto dt = std::get_if<Date>(&a.value)) out.push_back(to_serial(*dt));
        }
      } else {
        out.push_back(number(i));
      }
    }
    return out;
  }

  std::vector<ArgValue> flatten(std::size_t i) const {
    if (omitted(i)) bad(i, "is required");
    return ev_.flatten(*call_.args[i]);
  }

 private:
  const Evaluator& ev_;
  const Call& call_;
  const std::vector<std::string_view>& params_;
};

/// Catalog entry for a supported spreadsheet function. `params` names the
/// arguments in order (the last name repeats for variadic functions).
struct FunctionInfo {
  std::string_view name;
  std::size_t min_args = 0;
  std::size_t max_args = 0;
  std::vector<std::string_view> params;
  std::vector<std::size_t> rate_positions;  // arguments that carry an interest rate
  std::optional<std::size_t> basis_position;
  CellValue (*impl)(const CallArgs&) = nullptr;
};

namespace detail {

inline CellValue fn_sum(const CallArgs& a) {
  double s = 0.0;
  for (double v : a.numbers(0)) s += v;
  return s;
}

inline CellValue fn_npv(const CallArgs& a) {
  const Rate rate = a.number(0);
  const auto values = a.numbers(1);
  if (values.empty()) fail(ErrorKind::Argument, "NPV needs at least one value");
  return npv_legacy(rate, values);
}

inline CellValue fn_xnpv(const CallArgs& a) {
  const Rate rate = a.number(0);
  std::vector<Money> values;
  for (const auto& v : a.flatten(1)) {
    if (auto d = std::get_if<double>(&v.value)) values.push_back(*d);
    else a.bad(1, "must hold only numbers");
  }
  std::vector<Date> dates;
  for (const auto& v : a.flatten(2)) dates.push_back(a.to_date(v.value, 2));
  if (values.size() != dates.size()) fail(ErrorKind::Num, "XNPV: values and dates differ in length");
  return xnpv(rate, values, dates);
}

inline CellValue fn_db(const CallArgs& a) {
  DepreciationSpec spec{a.number(0), a.number(1), a.whole(2), a.omitted(4) ? 12 : a.whole(4)};
  return db_period(spec, a.whole(3), a.evaluator().options().mode);
}

inline CellValue fn_sln(const CallArgs& a) { return sln(a.number(0), a.number(1), a.whole(2)); }

inline CellValue fn_effect(const CallArgs& a) { return effective_rate(a.number(0), a.truncated(1)); }

inline CellValue fn_nominal(const CallArgs& a) { return nominal_rate(a.number(0), a.truncated(1)); }

inline DayCountBasis basis_arg(const CallArgs& a, std::size_t i) {
  if (a.omitted(i)) return DayCountBasis::Us30_360;
  const int code = a.whole(i);
  if (code < 0 || code > 4) a.bad(i, "must be 0-4");
  return basis_from_code(code);
}

inline CellValue fn_intrate(const CallArgs& a) {
  return intrate(a.date(0), a.date(1), a.number(2), a.number(3), basis_arg(a, 4));
}

inline CellValue fn_accrint(const CallArgs& a) {
  const Date issue = a.date(0);
  a.date(1);  // first_interest: validated; accrual is a single period
  const Date settlement = a.date(2);
  const Rate rate = a.number(3);
  const Money par = a.number_or(4, 1000.0);
  const int frequency = a.whole(5);
  if (frequency != 1 && frequency != 2 && frequency != 4) a.bad(5, "must be 1, 2 or 4");
  const DayCountBasis basis = basis_arg(a, 6);
  if (!a.omitted(7)) a.number(7);
  return accrint(issue, settlement, rate, par, basis);
}

inline CellValue fn_accrintm(const CallArgs& a) {
  return accrint(a.date(0), a.date(1), a.number(2), a.number_or(3, 1000.0), basis_arg(a, 4));
}

inline CellValue fn_pmt(const CallArgs& a) {
  if (a.number_or(3, 0.0) != 0.0) a.bad(3, "other than 0 is not supported");
  if (a.number_or(4, 0.0) != 0.0) a.bad(4, "other than 0 is not supported");
  return pmt(a.number(0), a.whole(1), a.number(2));
}

inline CellValue fn_days360(const CallArgs& a) {
  const bool european = !a.omitted(2) && a.number(2) != 0.0;
  const auto days =
      days_between(a.date(0), a.date(1), european ? DayCountBasis::Eur30_360 : DayCountBasis::Us30_360);
  return static_cast<double>(days);
}

}  // namespace detail

inline const std::vector<FunctionInfo>& function_catalog() {
  static const std::vector<FunctionInfo> catalog = {
      {"ACCRINT", 6, 8, {"issue", "first_interest", "settlement", "rate", "par", "frequency", "basis", "calc_method"},
       {3}, 6, detail::fn_accrint},
      {"ACCRINTM", 4, 5, {"issue", "settlement", "rate", "par", "basis"}, {2}, 4, detail::fn_accrintm},
      {"DAYS360", 2, 3, {"start_date", "end_date", "method"}, {}, 2, detail::fn_days360},
      {"DB", 4, 5, {"cost", "salvage", "life", "period", "month"}, {}, std::nullopt, detail::fn_db},
      {"EFFECT", 2, 2, {"nominal_rate", "npery"}, {0}, std::nullopt, detail::fn_effect},
      {"INTRATE", 4, 5, {"settlement", "maturity", "investment", "redemption", "basis"}, {}, 4, detail::fn_intrate},
      {"NOMINAL", 2, 2, {"effect_rate", "npery"}, {0}, std::nullopt, detail::fn_nominal},
      {"NPV", 2, 255, {"rate", "value"}, {0}, std::nullopt, detail::fn_npv},
      {"PMT", 3, 5, {"rate", "nper", "pv", "fv", "type"}, {0}, std::nullopt, detail::fn_pmt},
      {"SLN", 3, 3, {"cost", "salvage", "life"}, {}, std::nullopt, detail::fn_sln},
      {"SUM", 1, 255, {"number"}, {}, std::nullopt, detail::fn_sum},
      {"XNPV", 3, 3, {"rate", "values", "dates"}, {0}, std::nullopt, detail::fn_xnpv},
  };
  return catalog;
}

inline const FunctionInfo* find_function(std::string_view name) {
  for (const auto& f : function_catalog())
    if (f.name == name) return &f;
  return nullptr;
}

namespace detail {

inline CellValue dispatch(const Evaluator& ev, const Call& call) {
  const FunctionInfo* fn = find_function(call.name);
  if (!fn) fail(ErrorKind::UnknownFunction, "unknown function " + call.name);
  if (call.args.size() < fn->min_args || call.args.size() > fn->max_args) {
    fail(ErrorKind::Argument, call.name + " takes " + std::to_string(fn->min_args) +
                                  (fn->min_args == fn->max_args ? "" : "-" + std::to_string(fn->max_args)) +
                                  " arguments, got " + std::to_string(call.args.size()));
  }
  const CallArgs args(ev, call, fn->params);
  CellValue result;
  try {
    result = fn->impl(args);
  } catch (const Error& e) {
    fail(ErrorKind::Num, call.name + ": " + e.what());
  }
  if (auto d = std::get_if<double>(&result); d && !std::isfinite(*d))
    fail(ErrorKind::Num, call.name + ": result is not a finite number");
  return result;
}

}  // namespace detail

}  // namespace ledgerlint::formula
