#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "ledgerlint/date.hpp"

namespace testing_support {

inline std::filesystem::path fixture(const std::string& rel) {
  return std::filesystem::path(LEDGERLINT_FIXTURE_DIR) / rel;
}

// Fixed seeds keep every property run reproducible.
inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline int uniform_int(std::mt19937_64& g, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }

inline ledgerlint::Date random_date(std::mt19937_64& g, int first_year = 1900, int last_year = 2100) {
  const auto lo = ledgerlint::Date(first_year, 1, 1).serial();
  const auto hi = ledgerlint::Date(last_year, 12, 31).serial();
  return ledgerlint::Date::from_serial(std::uniform_int_distribution<std::int64_t>(lo, hi)(g));
}

}  // namespace testing_support
