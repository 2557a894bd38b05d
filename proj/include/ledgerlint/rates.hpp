#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "ledgerlint/date.hpp"
#include "ledgerlint/daycount.hpp"
#include "ledgerlint/error.hpp"
#include "ledgerlint/numfmt.hpp"
#include "ledgerlint/types.hpp"

namespace ledgerlint {

enum class PeriodicConvention {
  UsNominalDivide,  // annual / n
  UkEffectiveRoot,  // (1 + annual)^(1/n) - 1
};

constexpr std::string_view to_string(PeriodicConvention c) noexcept {
  return c == PeriodicConvention::UsNominalDivide ? "us" : "uk";
}

namespace detail {

inline void require_periods(int n) {
  if (n < 1) throw DomainError("periods per year must be at least 1");
}

inline void require_rate_above_minus_one(Rate r, const char* what) {
  if (!std::isfinite(r) || r <= -1.0) throw DomainError(std::string(what) + " must be finite and > -1");
}

}  // namespace detail

inline Rate effective_rate(Rate nominal, int periods_per_year) {
  detail::require_periods(periods_per_year);
  detail::require_rate_above_minus_one(nominal, "nominal rate");
  return std::pow(1.0 + nominal / periods_per_year, periods_per_year) - 1.0;
}

inline Rate nominal_rate(Rate effective, int periods_per_year) {
  detail::require_periods(periods_per_year);
  detail::require_rate_above_minus_one(effective, "effective rate");
  return periods_per_year * (std::pow(1.0 + effective, 1.0 / periods_per_year) - 1.0);
}

// Per-period rate from an annual quote. Dividing an effective (UK-style)
// quote by n overstates the periodic rate.
inline Rate periodic_rate(Rate annual, int periods_per_year, PeriodicConvention convention) {
  detail::require_periods(periods_per_year);
  detail::require_rate_above_minus_one(annual, "annual rate");
  if (convention == PeriodicConvention::UsNominalDivide) return annual / periods_per_year;
  return std::pow(1.0 + annual, 1.0 / periods_per_year) - 1.0;
}

// UK advertising rule: percent truncated after one decimal (11.995% -> 11.9%).
// The 1e-9 nudge (1e-12 in rate terms) keeps values that are already on the
// grid, like 0.119, from dropping a step through representation error.
inline Rate advertised_apr(Rate exact_annual) {
  if (!std::isfinite(exact_annual) || exact_annual < 0.0) throw DomainError("APR must be non-negative");
  return std::floor(exact_annual * 1000.0 + 1e-9) / 1000.0;
}

enum class AprVerdict { Compliant, Overstated, Understated };

constexpr std::string_view to_string(AprVerdict v) noexcept {
  switch (v) {
    case AprVerdict::Compliant: return "compliant";
    case AprVerdict::Overstated: return "overstated";
    case AprVerdict::Understated: return "understated";
  }
  return "?";
}

struct AprCheck {
  AprVerdict verdict = AprVerdict::Compliant;
  Rate expected_advertised = 0.0;
  double gap_bp = 0.0;  // (exact - advertised) in basis points
};

inline AprCheck verify_advertised(Rate exact_annual, Rate advertised) {
  if (advertised < 0.0) throw DomainError("advertised rate must be non-negative");
  AprCheck c;
  c.expected_advertised = advertised_apr(exact_annual);
  c.gap_bp = (exact_annual - advertised) * 10000.0;
  const double diff = advertised - c.expected_advertised;
  if (std::abs(diff) <= kRateTolerance)
    c.verdict = AprVerdict::Compliant;
  else
    c.verdict = diff > 0.0 ? AprVerdict::Overstated : AprVerdict::Understated;
  return c;
}

/// Simple-interest annual rate implied by buying at `investment` and
/// redeeming at `redemption`. Over spans longer than a year this is not the
/// compound rate, which is exactly how it misleads.
inline Rate intrate(const Date& settlement, const Date& maturity, Money investment, Money redemption,
                    DayCountBasis basis) {
  if (!(investment > 0.0)) throw DomainError("investment must be positive");
  if (!(settlement < maturity)) throw OrderingError("settlement must be before maturity");
  const double yf = year_fraction(settlement, maturity, basis);
  if (yf <= 0.0) throw DomainError("year fraction between settlement and maturity is zero under this basis");
  return ((redemption - investment) / investment) / yf;
}

// Single accrual period: par * rate * year_fraction(issue, settlement).
inline Money accrint(const Date& issue, const Date& settlement, Rate annual_rate, Money par, DayCountBasis basis) {
  if (!(par > 0.0)) throw DomainError("par must be positive");
  if (!(annual_rate >= 0.0)) throw DomainError("rate must be non-negative");
  if (settlement < issue) throw OrderingError("settlement precedes issue");
  return par * annual_rate * year_fraction(issue, settlement, basis);
}

// "0.119" or "11.9%". The percent form is divided by 100 here and nowhere else.
inline std::optional<Rate> try_parse_rate(std::string_view text) {
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (!text.empty() && text.back() == '%') {
    auto v = parse_number(text.substr(0, text.size() - 1));
    if (!v) return std::nullopt;
    return *v / 100.0;
  }
  return parse_number(text);
}

inline Rate parse_rate(std::string_view text) {
  auto r = try_parse_rate(text);
  if (!r) throw ValidationError("not a rate: '" + std::string(text) + "'");
  return *r;
}

}  // namespace ledgerlint
