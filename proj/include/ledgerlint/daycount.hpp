#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "ledgerlint/date.hpp"
#include "ledgerlint/error.hpp"

namespace ledgerlint {

enum class DayCountBasis {
  Us30_360,  // NASD; default for the accrual functions
  Eur30_360,
  ActualActual,
  Actual360,
  Actual365,
};

constexpr std::string_view to_string(DayCountBasis b) noexcept {
  switch (b) {
    case DayCountBasis::Us30_360: return "30/360 US";
    case DayCountBasis::Eur30_360: return "30/360 European";
    case DayCountBasis::ActualActual: return "Actual/Actual";
    case DayCountBasis::Actual360: return "Actual/360";
    case DayCountBasis::Actual365: return "Actual/365";
  }
  return "?";
}

// Spreadsheet basis codes: 0 US 30/360, 1 Act/Act, 2 Act/360, 3 Act/365, 4 Eur 30/360.
inline DayCountBasis basis_from_code(int code) {
  switch (code) {
    case 0: return DayCountBasis::Us30_360;
    case 1: return DayCountBasis::ActualActual;
    case 2: return DayCountBasis::Actual360;
    case 3: return DayCountBasis::Actual365;
    case 4: return DayCountBasis::Eur30_360;
    default: throw DomainError("basis code " + std::to_string(code) + " not in 0-4");
  }
}

constexpr bool is_actual(DayCountBasis b) noexcept {
  return b == DayCountBasis::ActualActual || b == DayCountBasis::Actual360 || b == DayCountBasis::Actual365;
}

inline std::int64_t actual_days(const Date& start, const Date& end) noexcept { return end.serial() - start.serial(); }

namespace detail {

inline void require_ordered(const Date& start, const Date& end) {
  if (end < start) throw OrderingError("start date " + start.iso() + " is after end date " + end.iso());
}

inline std::int64_t thirty_360(const Date& start, const Date& end, DayCountBasis basis) {
  int d1 = start.day();
  int d2 = end.day();
  if (basis == DayCountBasis::Us30_360) {
    if (d1 == 31) d1 = 30;
    if (d2 == 31 && d1 == 30) d2 = 30;
  } else {
    if (d1 == 31) d1 = 30;
    if (d2 == 31) d2 = 30;
  }
  return 360LL * (end.year() - start.year()) + 30LL * (end.month() - start.month()) + (d2 - d1);
}

// True if some 29 February lies in (start, end].
inline bool spans_leap_day(const Date& start, const Date& end) {
  for (int y = start.year(); y <= end.year(); ++y) {
    if (!is_leap_year(y)) continue;
    const Date leap_day(y, 2, 29);
    if (start < leap_day && leap_day <= end) return true;
  }
  return false;
}

}  // namespace detail

// Day count between two dates under `basis`. Throws OrderingError if end < start.
inline std::int64_t days_between(const Date& start, const Date& end, DayCountBasis basis) {
  detail::require_ordered(start, end);
  if (is_actual(basis)) return actual_days(start, end);
  return detail::thirty_360(start, end, basis);
}

// Year fraction under `basis`.
//
// 30/360 and Actual/360 divide by 360, Actual/365 by 365. Actual/Actual uses
// 366 when the span is at most one year and contains a 29 February in
// (start, end], 365 otherwise; longer spans divide by the mean length of the
// calendar years from start.year() through end.year().
inline double year_fraction(const Date& start, const Date& end, DayCountBasis basis) {
  const auto days = static_cast<double>(days_between(start, end, basis));
  switch (basis) {
    case DayCountBasis::Us30_360:
    case DayCountBasis::Eur30_360:
    case DayCountBasis::Actual360:
      return days / 360.0;
    case DayCountBasis::Actual365:
      return days / 365.0;
    case DayCountBasis::ActualActual: {
      // 2199 has no following year in range; any span starting there is short.
      const bool within_year = start.year() == kMaxYear || end <= start.add_years(1);
      if (within_year) return days / (detail::spans_leap_day(start, end) ? 366.0 : 365.0);
      double total = 0.0;
      for (int y = start.year(); y <= end.year(); ++y) total += days_in_year(y);
      return days / (total / (end.year() - start.year() + 1));
    }
  }
  return days / 360.0;
}

}  // namespace ledgerlint
