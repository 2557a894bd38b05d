#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "ledgerlint/error.hpp"

namespace ledgerlint {

inline constexpr int kMinYear = 1900;
inline constexpr int kMaxYear = 2199;

constexpr bool is_leap_year(int year) noexcept {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

constexpr int days_in_month(int year, int month) noexcept {
  constexpr int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2 && is_leap_year(year)) return 29;
  return kDays[month - 1];
}

constexpr int days_in_year(int year) noexcept { return is_leap_year(year) ? 366 : 365; }

// Proleptic Gregorian calendar date restricted to 1900-01-01 .. 2199-12-31.
class Date {
 public:
  // Throws ValidationError if the triple is not a supported calendar date.
  constexpr Date(int year, int month, int day) : year_(year), month_(month), day_(day) {
    if (year < kMinYear || year > kMaxYear)
      throw ValidationError("year " + std::to_string(year) + " outside supported range 1900-2199");
    if (month < 1 || month > 12) throw ValidationError("month " + std::to_string(month) + " not in 1-12");
    if (day < 1 || day > days_in_month(year, month))
      throw ValidationError("day " + std::to_string(day) + " invalid for " + std::to_string(year) + "-" +
                            std::to_string(month));
  }

  constexpr int year() const noexcept { return year_; }
  constexpr int month() const noexcept { return month_; }
  constexpr int day() const noexcept { return day_; }

  // Days since 1970-01-01 (Howard Hinnant's days_from_civil).
  constexpr std::int64_t serial() const noexcept {
    const int y = month_ <= 2 ? year_ - 1 : year_;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const int yoe = y - era * 400;
    const int mp = (month_ + 9) % 12;
    const int doy = (153 * mp + 2) / 5 + day_ - 1;
    const int doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<std::int64_t>(era) * 146097 + doe - 719468;
  }

  static constexpr Date from_serial(std::int64_t days) {
    days += 719468;
    const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
    const auto doe = static_cast<int>(days - era * 146097);
    const int yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const int mp = (5 * doy + 2) / 153;
    const int d = doy - (153 * mp + 2) / 5 + 1;
    const int m = mp < 10 ? mp + 3 : mp - 9;
    const auto y = static_cast<int>(yoe + era * 400 + (m <= 2 ? 1 : 0));
    return Date(y, m, d);
  }

  constexpr Date add_days(std::int64_t n) const { return from_serial(serial() + n); }

  // Same month/day `n` years later; 29 February clamps to the 28th.
  constexpr Date add_years(int n) const {
    const int y = year_ + n;
    const int d = month_ == 2 && day_ == 29 && !is_leap_year(y) ? 28 : day_;
    return Date(y, month_, d);
  }

  friend constexpr bool operator==(const Date&, const Date&) = default;
  friend constexpr auto operator<=>(const Date&, const Date&) = default;

  std::string iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year_, month_, day_);
    return buf;
  }

 private:
  int year_;
  int month_;
  int day_;
};

// Strict ISO 8601 calendar form YYYY-MM-DD. Returns nullopt when the text is
// not date-shaped; throws ValidationError when it is shaped like a date but
// names an impossible or unsupported day.
inline std::optional<Date> try_parse_iso_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto field = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (text[i] < '0' || text[i] > '9') return std::nullopt;
    }
    std::from_chars(text.data() + pos, text.data() + pos + len, v);
    return v;
  };
  auto y = field(0, 4), m = field(5, 2), d = field(8, 2);
  if (!y || !m || !d) return std::nullopt;
  return Date(*y, *m, *d);
}

inline Date parse_iso_date(std::string_view text) {
  auto d = try_parse_iso_date(text);
  if (!d) throw ValidationError("expected an ISO date YYYY-MM-DD, got '" + std::string(text) + "'");
  return *d;
}

}  // namespace ledgerlint
