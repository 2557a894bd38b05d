#pragma once

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "ledgerlint/error.hpp"
#include "ledgerlint/numfmt.hpp"
#include "ledgerlint/types.hpp"

namespace ledgerlint {

/// Inputs of a fixed-declining-balance depreciation.
///
/// `month` is the number of months the asset is in service during the first
/// accounting year. It only has a meaning when periods are years; when it is
/// below 12 the schedule gains an extra, partial final period.
struct DepreciationSpec {
  Money cost = 0.0;
  Money salvage = 0.0;
  int life = 1;
  int month = 12;

  void validate() const {
    if (!std::isfinite(cost) || cost <= 0.0) throw ValidationError("cost must be positive");
    if (!std::isfinite(salvage) || salvage < 0.0) throw ValidationError("salvage must be non-negative");
    if (salvage > cost) throw DomainError("salvage exceeds cost");
    if (life < 1) throw ValidationError("life must be at least 1 period");
    if (month < 1 || month > 12) throw ValidationError("month must be in 1-12");
  }

  int period_count() const noexcept { return month < 12 ? life + 1 : life; }
};

struct DbRate {
  double value = 0.0;
  // Set when salvage is 0: the rate degenerates to a full write-off.
  bool saturated = false;
};

namespace detail {

inline double round_half_away(double x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(x * scale) / scale;
}

}  // namespace detail

/// Declining-balance rate 1 - (salvage/cost)^(1/life).
///
/// Compat rounds the rate half-away-from-zero to three decimals, which is what
/// the spreadsheet DB function does internally and why its schedules fail to
/// land on the salvage value. Exact leaves it unrounded.
inline DbRate db_rate(const DepreciationSpec& spec, PrecisionMode mode) {
  spec.validate();
  if (spec.salvage == 0.0) return {1.0, true};
  const double raw = 1.0 - std::pow(spec.salvage / spec.cost, 1.0 / spec.life);
  return {mode == PrecisionMode::Compat ? detail::round_half_away(raw, 3) : raw, false};
}

struct DepreciationRow {
  int period = 0;
  Money depreciation = 0.0;
  Money book_value_end = 0.0;
};

struct DepreciationSchedule {
  std::vector<DepreciationRow> rows;
  PrecisionMode mode = PrecisionMode::Exact;
  double rate = 0.0;
  bool rate_saturated = false;

  Money total_depreciation() const {
    Money sum = 0.0;
    for (const auto& r : rows) sum += r.depreciation;
    return sum;
  }
  Money final_book_value() const { return rows.empty() ? 0.0 : rows.back().book_value_end; }
};

/// Walks the declining-balance recurrence with an explicit per-period rate.
/// Separated from db_schedule so callers can replay a schedule at another
/// rate, e.g. Compat's structure with the unrounded rate.
inline DepreciationSchedule db_schedule_at_rate(const DepreciationSpec& spec, double rate, PrecisionMode mode) {
  spec.validate();
  DepreciationSchedule out;
  out.mode = mode;
  out.rate = rate;
  const int n = spec.period_count();
  out.rows.reserve(static_cast<std::size_t>(n));
  Money book = spec.cost;
  for (int p = 1; p <= n; ++p) {
    Money dep = 0.0;
    if (p == 1)
      dep = spec.cost * rate * spec.month / 12.0;
    else if (p <= spec.life)
      dep = book * rate;
    else
      dep = book * rate * (12 - spec.month) / 12.0;
    book -= dep;
    out.rows.push_back({p, dep, book});
  }
  return out;
}

inline DepreciationSchedule db_schedule(const DepreciationSpec& spec, PrecisionMode mode) {
  const DbRate r = db_rate(spec, mode);
  auto s = db_schedule_at_rate(spec, r.value, mode);
  s.rate_saturated = r.saturated;
  return s;
}

/// Depreciation for a single period (1-based). Valid periods run to `life`,
/// or to `life + 1` when the first year is partial.
inline Money db_period(const DepreciationSpec& spec, int period, PrecisionMode mode) {
  spec.validate();
  const int last = spec.period_count();
  if (period < 1 || period > last) {
    std::string msg = "period " + std::to_string(period) + " outside 1-" + std::to_string(last);
    msg += spec.month < 12 ? "; a partial first year (month < 12) adds one extra final period"
                           : "; periods beyond life exist only when month < 12";
    throw RangeError(msg);
  }
  return db_schedule(spec, mode).rows[static_cast<std::size_t>(period - 1)].depreciation;
}

inline Money sln(Money cost, Money salvage, int life) {
  if (life < 1) throw DomainError("life must be at least 1 period");
  if (salvage > cost) throw DomainError("salvage exceeds cost");
  return (cost - salvage) / life;
}

struct Reconciliation {
  Money total_depreciation = 0.0;
  Money residual_book_value = 0.0;
  Money gap = 0.0;  // residual - salvage, signed
  bool flagged = false;
};

// Flags when |gap| exceeds `relative_tolerance * cost`.
inline Reconciliation reconcile(const DepreciationSchedule& schedule, const DepreciationSpec& spec,
                                double relative_tolerance = 1e-6) {
  Reconciliation r;
  r.total_depreciation = schedule.total_depreciation();
  r.residual_book_value = spec.cost - r.total_depreciation;
  r.gap = r.residual_book_value - spec.salvage;
  r.flagged = std::abs(r.gap) > relative_tolerance * spec.cost;
  return r;
}

inline void write_csv(std::ostream& os, const DepreciationSchedule& schedule) {
  os << "period,depreciation,book_value_end\n";
  for (const auto& r : schedule.rows)
    os << r.period << ',' << format_number(r.depreciation) << ',' << format_number(r.book_value_end) << '\n';
}

}  // namespace ledgerlint
