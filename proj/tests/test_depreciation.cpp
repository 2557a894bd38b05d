#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "ledgerlint/depreciation.hpp"
#include "support.hpp"

using namespace ledgerlint;

namespace {

const DepreciationSpec kMachine{1'000'000, 100'000, 6, 12};

// Reference values were computed independently at 50-digit precision.
constexpr double kExactRate = 0.3187079309420387;

void expect_rows(const DepreciationSchedule& s, const std::vector<double>& expected) {
  ASSERT_EQ(s.rows.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(s.rows[i].period, static_cast<int>(i + 1));
    EXPECT_NEAR(s.rows[i].depreciation, expected[i], 1e-6) << "period " << i + 1;
  }
}

DepreciationSpec random_spec(std::mt19937_64& g, int month = 12) {
  DepreciationSpec s;
  s.cost = testing_support::uniform(g, 100.0, 1e7);
  s.salvage = s.cost * testing_support::uniform(g, 0.001, 1.0);
  s.life = testing_support::uniform_int(g, 1, 40);
  s.month = month;
  return s;
}

}  // namespace

TEST(Depreciation, RateByMode) {
  EXPECT_NEAR(db_rate(kMachine, PrecisionMode::Exact).value, kExactRate, 1e-15);
  EXPECT_EQ(db_rate(kMachine, PrecisionMode::Compat).value, 0.319);
  EXPECT_FALSE(db_rate(kMachine, PrecisionMode::Compat).saturated);
}

TEST(Depreciation, CompatRoundsHalfAwayFromZero) {
  EXPECT_EQ(detail::round_half_away(0.3185, 3), 0.319);
  EXPECT_EQ(detail::round_half_away(0.3184999, 3), 0.318);
  EXPECT_EQ(detail::round_half_away(0.0005, 3), 0.001);
}

TEST(Depreciation, HalvingExample) {
  const auto s = db_schedule({100, 25, 2, 12}, PrecisionMode::Exact);
  expect_rows(s, {50, 25});
  EXPECT_DOUBLE_EQ(s.final_book_value(), 25);
}

TEST(Depreciation, CompatScheduleMissesSalvage) {
  const auto s = db_schedule(kMachine, PrecisionMode::Compat);
  expect_rows(s, {319000, 217239, 147939.759, 100746.975879, 68608.690573599, 46722.51828062092});
  EXPECT_NEAR(s.final_book_value(), 99743.05626678, 1e-6);
  const auto rec = reconcile(s, kMachine);
  EXPECT_NEAR(rec.gap, -256.94373322, 1e-6);
  EXPECT_GT(std::abs(rec.gap), 100.0);
  EXPECT_TRUE(rec.flagged);
}

TEST(Depreciation, ExactScheduleLandsOnSalvage) {
  const auto s = db_schedule(kMachine, PrecisionMode::Exact);
  const auto rec = reconcile(s, kMachine);
  EXPECT_LE(std::abs(rec.gap), 1e-6 * kMachine.cost);
  EXPECT_FALSE(rec.flagged);
}

TEST(Depreciation, PartialFirstYearAddsPeriod) {
  DepreciationSpec spec = kMachine;
  spec.month = 7;
  const auto s = db_schedule(spec, PrecisionMode::Compat);
  expect_rows(s, {186083.33333333334, 259639.41666666666, 176814.44275, 120410.63551275, 81999.64278418275,
                  55841.75673602845, 15845.098473848073});
  EXPECT_NEAR(s.final_book_value(), 103365.67374319, 1e-6);

  double first_six = 0.0;
  for (int i = 0; i < 6; ++i) first_six += s.rows[static_cast<std::size_t>(i)].depreciation;
  EXPECT_NEAR(first_six, 880789.2277829612, 1e-6);
  EXPECT_LT(first_six, s.total_depreciation());

  EXPECT_NEAR(db_schedule(spec, PrecisionMode::Exact).final_book_value(), 103623.74776653, 1e-6);
}

TEST(Depreciation, PeriodAccess) {
  DepreciationSpec spec = kMachine;
  EXPECT_DOUBLE_EQ(db_period(spec, 1, PrecisionMode::Compat), 319000);
  EXPECT_THROW(db_period(spec, 7, PrecisionMode::Compat), RangeError);
  spec.month = 7;
  EXPECT_NEAR(db_period(spec, 7, PrecisionMode::Compat), 15845.098473848073, 1e-6);
  try {
    db_period(spec, 8, PrecisionMode::Compat);
    FAIL();
  } catch (const RangeError& e) {
    EXPECT_NE(std::string(e.what()).find("extra"), std::string::npos);
  }
}

TEST(Depreciation, DegenerateSpecs) {
  const auto same = db_schedule({500, 500, 5, 12}, PrecisionMode::Compat);
  for (const auto& r : same.rows) EXPECT_EQ(r.depreciation, 0.0);
  EXPECT_EQ(reconcile(same, {500, 500, 5, 12}).gap, 0.0);

  const auto zero = db_schedule({1000, 0, 4, 12}, PrecisionMode::Exact);
  EXPECT_TRUE(zero.rate_saturated);
  EXPECT_EQ(zero.rate, 1.0);
  EXPECT_EQ(zero.rows[0].depreciation, 1000.0);
  EXPECT_EQ(zero.final_book_value(), 0.0);
}

TEST(Depreciation, Validation) {
  EXPECT_THROW(db_schedule({0, 0, 5, 12}, PrecisionMode::Exact), ValidationError);
  EXPECT_THROW(db_schedule({100, -1, 5, 12}, PrecisionMode::Exact), ValidationError);
  EXPECT_THROW(db_schedule({100, 200, 5, 12}, PrecisionMode::Exact), DomainError);
  EXPECT_THROW(db_schedule({100, 10, 0, 12}, PrecisionMode::Exact), ValidationError);
  EXPECT_THROW(db_schedule({100, 10, 5, 0}, PrecisionMode::Exact), ValidationError);
  EXPECT_THROW(db_schedule({100, 10, 5, 13}, PrecisionMode::Exact), ValidationError);
}

TEST(Depreciation, StraightLine) {
  EXPECT_EQ(sln(1000, 100, 9), 100);
  EXPECT_EQ(sln(500, 500, 5), 0);
  EXPECT_EQ(sln(1'000'000, 100'000, 6), 150'000);
  EXPECT_THROW(sln(1000, 100, 0), DomainError);
}

TEST(Depreciation, CsvOutput) {
  std::ostringstream os;
  write_csv(os, db_schedule({100, 25, 2, 12}, PrecisionMode::Exact));
  EXPECT_EQ(os.str(), "period,depreciation,book_value_end\n1,50,50\n2,25,25\n");
}

TEST(DepreciationProperty, ExactEndsAtSalvage) {
  auto g = testing_support::rng(21);
  for (int i = 0; i < 500; ++i) {
    const auto spec = random_spec(g);
    const auto s = db_schedule(spec, PrecisionMode::Exact);
    EXPECT_NEAR(s.final_book_value(), spec.salvage, 1e-9 * spec.cost)
        << spec.cost << " " << spec.salvage << " " << spec.life;
  }
}

TEST(DepreciationProperty, CompatGapIsOnlyRateRounding) {
  auto g = testing_support::rng(22);
  for (int i = 0; i < 200; ++i) {
    const auto spec = random_spec(g, testing_support::uniform_int(g, 1, 12));
    const auto exact = db_schedule(spec, PrecisionMode::Exact);
    const auto replay = db_schedule_at_rate(spec, db_rate(spec, PrecisionMode::Exact).value, PrecisionMode::Compat);
    ASSERT_EQ(replay.rows.size(), exact.rows.size());
    for (std::size_t k = 0; k < exact.rows.size(); ++k) {
      EXPECT_EQ(replay.rows[k].depreciation, exact.rows[k].depreciation);
      EXPECT_EQ(replay.rows[k].book_value_end, exact.rows[k].book_value_end);
    }
  }
}

TEST(DepreciationProperty, RowsStayAboveShiftedSalvage) {
  auto g = testing_support::rng(23);
  for (int i = 0; i < 300; ++i) {
    const auto spec = random_spec(g, testing_support::uniform_int(g, 1, 12));
    for (auto mode : {PrecisionMode::Compat, PrecisionMode::Exact}) {
      const auto s = db_schedule(spec, mode);
      const double gap = std::abs(reconcile(s, spec).gap);
      for (const auto& r : s.rows) {
        EXPECT_GE(r.depreciation, 0.0);
        EXPECT_GE(r.book_value_end, spec.salvage - gap - 1e-9 * spec.cost);
      }
    }
  }
}

TEST(DepreciationProperty, LengthAndDefaultMonth) {
  auto g = testing_support::rng(24);
  for (int i = 0; i < 200; ++i) {
    auto spec = random_spec(g);
    DepreciationSpec defaulted{spec.cost, spec.salvage, spec.life};
    const auto a = db_schedule(spec, PrecisionMode::Compat);
    const auto b = db_schedule(defaulted, PrecisionMode::Compat);
    ASSERT_EQ(a.rows.size(), static_cast<std::size_t>(spec.life));
    for (std::size_t k = 0; k < a.rows.size(); ++k) EXPECT_EQ(a.rows[k].depreciation, b.rows[k].depreciation);
    spec.month = testing_support::uniform_int(g, 1, 11);
    EXPECT_EQ(db_schedule(spec, PrecisionMode::Compat).rows.size(), static_cast<std::size_t>(spec.life + 1));
  }
}
