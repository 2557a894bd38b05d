#pragma once

#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ledgerlint/cashflow.hpp"
#include "ledgerlint/csv.hpp"
#include "ledgerlint/error.hpp"
#include "ledgerlint/numfmt.hpp"
#include "ledgerlint/rates.hpp"
#include "ledgerlint/types.hpp"

namespace ledgerlint {

struct LoanSpec {
  Money principal = 0.0;
  Rate quoted_annual = 0.0;
  PeriodicConvention convention = PeriodicConvention::UkEffectiveRoot;
  int term_months = 1;
  int holiday_months = 0;

  void validate() const {
    if (!std::isfinite(principal) || principal <= 0.0) throw ValidationError("principal must be positive");
    if (!std::isfinite(quoted_annual) || quoted_annual <= -1.0) throw ValidationError("annual rate must be > -1");
    if (term_months < 1) throw ValidationError("term must be at least 1 month");
    if (holiday_months < 0) throw ValidationError("holiday must be non-negative");
    if (holiday_months >= term_months) throw ValidationError("holiday must be shorter than the term");
  }
};

struct AmortizationRow {
  int month = 0;
  Money opening = 0.0;
  Money interest = 0.0;
  Money principal_paid = 0.0;
  Money payment = 0.0;
  Money closing = 0.0;
};

struct AmortizationSchedule {
  std::vector<AmortizationRow> rows;
  Rate monthly_rate = 0.0;

  Money principal() const { return rows.empty() ? 0.0 : rows.front().opening; }
};

/// Builds a schedule from a monthly rate directly.
///
/// The first `holiday_months` rows take no payment; their interest is added
/// to the balance every month. The remaining rows pay the level annuity on
/// the capitalised balance, except the last, which pays whatever closes the
/// balance to exactly zero.
inline AmortizationSchedule build_schedule_at_rate(Money principal, Rate monthly_rate, int term_months,
                                                   int holiday_months = 0) {
  LoanSpec{principal, 0.0, PeriodicConvention::UsNominalDivide, term_months, holiday_months}.validate();
  if (!std::isfinite(monthly_rate) || monthly_rate <= -1.0) throw ValidationError("monthly rate must be > -1");

  AmortizationSchedule s;
  s.monthly_rate = monthly_rate;
  s.rows.reserve(static_cast<std::size_t>(term_months));
  Money balance = principal;
  for (int m = 1; m <= holiday_months; ++m) {
    const Money interest = balance * monthly_rate;
    s.rows.push_back({m, balance, interest, 0.0, 0.0, balance + interest});
    balance += interest;
  }
  const int repayments = term_months - holiday_months;
  const Money level = -pmt(monthly_rate, repayments, balance);
  for (int m = holiday_months + 1; m <= term_months; ++m) {
    const Money interest = balance * monthly_rate;
    const Money payment = m == term_months ? balance + interest : level;
    AmortizationRow row{m, balance, interest, payment - interest, payment, 0.0};
    row.closing = m == term_months ? 0.0 : balance + interest - payment;
    balance = row.closing;
    s.rows.push_back(row);
  }
  return s;
}

inline AmortizationSchedule build_schedule(const LoanSpec& spec) {
  spec.validate();
  return build_schedule_at_rate(spec.principal, periodic_rate(spec.quoted_annual, 12, spec.convention),
                                spec.term_months, spec.holiday_months);
}

// A repayment table as published by a lender. Any value column may be absent.
struct PublishedRow {
  int month = 0;
  std::optional<Money> opening;
  std::optional<Money> interest;
  std::optional<Money> payment;
  std::optional<Money> closing;
};

struct PublishedTable {
  std::vector<PublishedRow> rows;

  static PublishedTable from_schedule(const AmortizationSchedule& s) {
    PublishedTable t;
    for (const auto& r : s.rows) t.rows.push_back({r.month, r.opening, r.interest, r.payment, r.closing});
    return t;
  }
};

// Header month,opening,interest,payment,closing; any subset of the value
// columns, in any order. `month` is required.
inline PublishedTable read_published_table(std::istream& in) {
  const auto rows = read_csv(in);
  if (rows.empty()) throw LoadError("published table is empty");
  int month_col = -1, opening_col = -1, interest_col = -1, payment_col = -1, closing_col = -1;
  for (std::size_t c = 0; c < rows[0].size(); ++c) {
    const std::string& h = rows[0][c];
    const int col = static_cast<int>(c);
    if (h == "month") month_col = col;
    else if (h == "opening") opening_col = col;
    else if (h == "interest") interest_col = col;
    else if (h == "payment") payment_col = col;
    else if (h == "closing") closing_col = col;
    else if (h == "principal_paid") continue;
    else throw LoadError("unknown column '" + h + "' in published table");
  }
  if (month_col < 0) throw LoadError("published table has no month column");

  PublishedTable t;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() == 1 && row[0].empty()) continue;
    auto cell = [&](int col) -> std::optional<Money> {
      if (col < 0) return std::nullopt;
      if (static_cast<std::size_t>(col) >= row.size())
        throw LoadError("line " + std::to_string(i + 1) + ": missing column");
      auto v = parse_number(row[static_cast<std::size_t>(col)]);
      if (!v) throw LoadError("line " + std::to_string(i + 1) + ": '" + row[static_cast<std::size_t>(col)] +
                              "' is not a number");
      return v;
    };
    const auto month = cell(month_col);
    if (*month != std::floor(*month)) throw LoadError("line " + std::to_string(i + 1) + ": month is not whole");
    t.rows.push_back({static_cast<int>(*month), cell(opening_col), cell(interest_col), cell(payment_col),
                      cell(closing_col)});
  }
  return t;
}

inline void write_csv(std::ostream& os, const AmortizationSchedule& s) {
  os << "month,opening,interest,payment,closing\n";
  for (const auto& r : s.rows) {
    os << r.month << ',' << format_number(r.opening) << ',' << format_number(r.interest) << ','
       << format_number(r.payment) << ',' << format_number(r.closing) << '\n';
  }
}

struct RowDiscrepancy {
  enum class Kind {
    Values,  // a compared column differs beyond tolerance
    Length,  // tables have different row counts
  };
  Kind kind = Kind::Values;
  int month = 0;
  // candidate - published; empty when the column was not compared or agreed
  std::optional<Money> payment_delta;
  std::optional<Money> interest_delta;
  std::optional<Money> closing_delta;
  std::size_t candidate_rows = 0;
  std::size_t published_rows = 0;
};

/// Compares payment, interest and closing balance row by row. Columns absent
/// from the published table are skipped. A row-count mismatch is reported as
/// one Length entry after the common rows.
inline std::vector<RowDiscrepancy> verify_schedule(const AmortizationSchedule& candidate,
                                                   const PublishedTable& published, Money tolerance) {
  std::vector<RowDiscrepancy> out;
  const std::size_t n = std::min(candidate.rows.size(), published.rows.size());
  auto compare = [&](Money mine, const std::optional<Money>& theirs) -> std::optional<Money> {
    if (!theirs) return std::nullopt;
    const Money delta = mine - *theirs;
    if (std::abs(delta) > tolerance) return delta;
    return std::nullopt;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = candidate.rows[i];
    const auto& p = published.rows[i];
    RowDiscrepancy d;
    d.month = c.month;
    d.payment_delta = compare(c.payment, p.payment);
    d.interest_delta = compare(c.interest, p.interest);
    d.closing_delta = compare(c.closing, p.closing);
    if (d.payment_delta || d.interest_delta || d.closing_delta) out.push_back(d);
  }
  if (candidate.rows.size() != published.rows.size()) {
    RowDiscrepancy d;
    d.kind = RowDiscrepancy::Kind::Length;
    d.month = static_cast<int>(n + 1);
    d.candidate_rows = candidate.rows.size();
    d.published_rows = published.rows.size();
    out.push_back(d);
  }
  return out;
}

inline std::vector<RowDiscrepancy> verify_schedule(const AmortizationSchedule& candidate,
                                                   const AmortizationSchedule& published, Money tolerance) {
  return verify_schedule(candidate, PublishedTable::from_schedule(published), tolerance);
}

struct ImpliedRate {
  Rate monthly = 0.0;
  Rate effective_annual = 0.0;
};

/// Monthly rate r at which the payments (payment k falls at month k)
/// discount back to `principal`. Bisection over (-0.5, 1.0) down to a
/// bracket width of 1e-10.
inline ImpliedRate implied_monthly_rate(Money principal, std::span<const Money> payments) {
  bool any_payment = false;
  for (Money p : payments) any_payment = any_payment || p != 0.0;
  if (!any_payment) throw DomainError("no repayments to solve against");

  auto excess = [&](Rate r) {
    Money pv = 0.0;
    for (std::size_t k = 0; k < payments.size(); ++k)
      pv += payments[k] / std::pow(1.0 + r, static_cast<double>(k + 1));
    return pv - principal;
  };

  Rate lo = -0.5, hi = 1.0;
  double f_lo = excess(lo);
  const double f_hi = excess(hi);
  if (f_lo == 0.0) return {lo, std::pow(1.0 + lo, 12) - 1.0};
  if (f_hi == 0.0) return {hi, std::pow(1.0 + hi, 12) - 1.0};
  if ((f_lo > 0.0) == (f_hi > 0.0)) throw NoSolutionError("payments do not bracket a monthly rate in (-0.5, 1.0)");
  while (hi - lo > 1e-10) {
    const Rate mid = 0.5 * (lo + hi);
    const double f_mid = excess(mid);
    if (f_mid == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  const Rate r = 0.5 * (lo + hi);
  return {r, std::pow(1.0 + r, 12) - 1.0};
}

inline ImpliedRate implied_monthly_rate(const AmortizationSchedule& schedule) {
  if (schedule.rows.empty()) throw DomainError("schedule has no rows");
  std::vector<Money> payments;
  payments.reserve(schedule.rows.size());
  for (const auto& r : schedule.rows) payments.push_back(r.payment);
  return implied_monthly_rate(schedule.principal(), payments);
}

}  // namespace ledgerlint
