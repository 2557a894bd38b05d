#pragma once

#include <string_view>

namespace ledgerlint {

// Monetary amounts are IEEE binary64, the same substrate spreadsheet
// arithmetic uses. Nothing in the library rounds to cents; presentation
// code does that if it wants to.
using Money = double;

// Interest rates as fractions per stated period (0.12 is 12%).
using Rate = double;

// Absolute tolerance used wherever a verdict compares two rates.
inline constexpr double kRateTolerance = 1e-12;

enum class PrecisionMode {
  Compat,  // reproduce legacy spreadsheet behaviour, anomalies included
  Exact,   // full precision, no hidden rounding
};

constexpr std::string_view to_string(PrecisionMode m) noexcept {
  return m == PrecisionMode::Compat ? "compat" : "exact";
}

}  // namespace ledgerlint
