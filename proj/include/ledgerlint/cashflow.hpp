#pragma once

#include <cmath>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ledgerlint/csv.hpp"
#include "ledgerlint/date.hpp"
#include "ledgerlint/daycount.hpp"
#include "ledgerlint/error.hpp"
#include "ledgerlint/numfmt.hpp"
#include "ledgerlint/types.hpp"

namespace ledgerlint {

// Non-empty list of signed flows, optionally dated. Dates, when present,
// match the values one-to-one and are strictly increasing.
class CashFlowSeries {
 public:
  explicit CashFlowSeries(std::vector<Money> values) : values_(std::move(values)) { check(); }
  CashFlowSeries(std::vector<Money> values, std::vector<Date> dates)
      : values_(std::move(values)), dates_(std::move(dates)) {
    check();
  }

  std::span<const Money> values() const noexcept { return values_; }
  const std::optional<std::vector<Date>>& dates() const noexcept { return dates_; }
  bool dated() const noexcept { return dates_.has_value(); }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  void check() const {
    if (values_.empty()) throw ValidationError("cash-flow series is empty");
    if (!dates_) return;
    if (dates_->size() != values_.size()) throw ValidationError("dates and values differ in length");
    for (std::size_t i = 1; i < dates_->size(); ++i) {
      if (!((*dates_)[i - 1] < (*dates_)[i]))
        throw ValidationError("dates must be strictly increasing (" + (*dates_)[i - 1].iso() + " then " +
                              (*dates_)[i].iso() + ")");
    }
  }

  std::vector<Money> values_;
  std::optional<std::vector<Date>> dates_;
};

namespace detail {

inline void require_discount_rate(Rate rate) {
  if (!std::isfinite(rate) || rate <= -1.0) throw DomainError("discount rate must be finite and > -1");
}

}  // namespace detail

// Legacy NPV: every value is discounted, the first one by a full period.
// An empty span is worth 0.
inline Money npv_legacy(Rate rate, std::span<const Money> values) {
  detail::require_discount_rate(rate);
  Money sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += values[i] / std::pow(1.0 + rate, static_cast<double>(i + 1));
  return sum;
}

// Period-0 NPV: the first value is already at today's money and is added
// undiscounted.
inline Money npv_t0(Rate rate, std::span<const Money> values) {
  detail::require_discount_rate(rate);
  if (values.empty()) throw ValidationError("cash-flow series is empty");
  return values[0] + npv_legacy(rate, values.subspan(1));
}

inline Money npv_legacy(Rate rate, const CashFlowSeries& s) { return npv_legacy(rate, s.values()); }
inline Money npv_t0(Rate rate, const CashFlowSeries& s) { return npv_t0(rate, s.values()); }

// Dated NPV at dates[0]; exponent is actual days / 365 with no leap-year
// adjustment.
inline Money xnpv(Rate rate, std::span<const Money> values, std::span<const Date> dates) {
  detail::require_discount_rate(rate);
  if (values.empty()) throw ValidationError("cash-flow series is empty");
  if (values.size() != dates.size()) throw ValidationError("dates and values differ in length");
  for (std::size_t i = 1; i < dates.size(); ++i) {
    if (!(dates[i - 1] < dates[i])) throw ValidationError("XNPV dates must be strictly increasing");
  }
  Money sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double years = static_cast<double>(actual_days(dates[0], dates[i])) / 365.0;
    sum += values[i] / std::pow(1.0 + rate, years);
  }
  return sum;
}

inline Money xnpv(Rate rate, const CashFlowSeries& s) {
  if (!s.dated()) throw ValidationError("XNPV needs a dated series");
  return xnpv(rate, s.values(), *s.dates());
}

// Level payment that retires `pv` over `nper` periods; sign opposite to pv.
inline Money pmt(Rate rate, int nper, Money pv) {
  if (nper < 1) throw DomainError("nper must be at least 1");
  detail::require_discount_rate(rate);
  if (rate == 0.0) return -pv / nper;
  return -pv * rate / (1.0 - std::pow(1.0 + rate, -static_cast<double>(nper)));
}

// One column (value) or two columns (date,value). A first row that does not
// parse is taken as a header.
inline CashFlowSeries read_cash_flows(std::istream& in) {
  const auto rows = read_csv(in);
  std::vector<Money> values;
  std::vector<Date> dates;
  bool any_dated = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.empty() || (row.size() == 1 && row[0].empty())) continue;
    const std::string where = "cash-flow line " + std::to_string(i + 1);
    if (row.size() == 1) {
      auto v = parse_number(row[0]);
      if (!v) {
        if (i == 0) continue;
        throw LoadError(where + ": not a number");
      }
      values.push_back(*v);
    } else if (row.size() == 2) {
      auto v = parse_number(row[1]);
      std::optional<Date> d;
      try {
        d = try_parse_iso_date(row[0]);
      } catch (const ValidationError& e) {
        throw LoadError(where + ": " + e.what());
      }
      if (!v || !d) {
        if (i == 0) continue;
        throw LoadError(where + ": expected date,value");
      }
      any_dated = true;
      dates.push_back(*d);
      values.push_back(*v);
    } else {
      throw LoadError(where + ": expected one or two columns");
    }
  }
  if (any_dated && dates.size() != values.size()) throw LoadError("mixed dated and undated cash-flow rows");
  try {
    return any_dated ? CashFlowSeries(std::move(values), std::move(dates)) : CashFlowSeries(std::move(values));
  } catch (const ValidationError& e) {
    throw LoadError(e.what());
  }
}

}  // namespace ledgerlint
