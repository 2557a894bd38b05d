#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ledgerlint/cashflow.hpp"
#include "ledgerlint/loan.hpp"
#include "support.hpp"

using namespace ledgerlint;

namespace {

constexpr Rate kEffective12 = 0.12682503013196972;  // (1.01)^12 - 1

LoanSpec random_spec(std::mt19937_64& g) {
  LoanSpec s;
  s.principal = testing_support::uniform(g, 500.0, 1e6);
  s.quoted_annual = testing_support::uniform(g, 0.0, 0.4);
  s.convention = testing_support::uniform_int(g, 0, 1) ? PeriodicConvention::UkEffectiveRoot
                                                        : PeriodicConvention::UsNominalDivide;
  s.term_months = testing_support::uniform_int(g, 2, 360);
  s.holiday_months = testing_support::uniform_int(g, 0, std::min(12, s.term_months - 1));
  return s;
}

Money sum_principal(const AmortizationSchedule& s) {
  Money total = 0.0;
  for (const auto& r : s.rows) total += r.principal_paid;
  return total;
}

}  // namespace

TEST(Loan, LevelPaymentByConvention) {
  const auto uk = build_schedule({10000, kEffective12, PeriodicConvention::UkEffectiveRoot, 60, 0});
  const auto us = build_schedule({10000, kEffective12, PeriodicConvention::UsNominalDivide, 60, 0});
  EXPECT_NEAR(uk.rows[0].payment, 222.44447684901778, 1e-9);
  EXPECT_NEAR(us.rows[0].payment, 225.90873738437823, 1e-9);
  EXPECT_GT(us.rows[0].payment, uk.rows[0].payment);
  EXPECT_NEAR(implied_monthly_rate(uk).monthly, 0.01, 1e-8);
  EXPECT_NEAR(implied_monthly_rate(us).monthly, 0.010568752510997477, 1e-8);
}

TEST(Loan, ScheduleShape) {
  const auto s = build_schedule_at_rate(10000, 0.01, 12);
  ASSERT_EQ(s.rows.size(), 12u);
  EXPECT_EQ(s.principal(), 10000);
  EXPECT_NEAR(s.rows[0].interest, 100, 1e-12);
  EXPECT_NEAR(s.rows[0].payment, 888.4878867834171, 1e-9);
  EXPECT_EQ(s.rows.back().closing, 0.0);
  for (std::size_t i = 1; i < s.rows.size(); ++i) EXPECT_EQ(s.rows[i].opening, s.rows[i - 1].closing);
}

TEST(Loan, HolidayCapitalisesMonthly) {
  const auto s = build_schedule_at_rate(10000, 0.01, 15, 3);
  for (int m = 0; m < 3; ++m) {
    EXPECT_EQ(s.rows[static_cast<std::size_t>(m)].payment, 0.0);
    EXPECT_EQ(s.rows[static_cast<std::size_t>(m)].principal_paid, 0.0);
  }
  EXPECT_NEAR(s.rows[2].closing, 10303.01, 1e-9);
  EXPECT_NEAR(sum_principal(s), 10303.01, 1e-6);
  EXPECT_NEAR(s.rows[3].payment, -pmt(0.01, 12, 10303.01), 1e-9);
  EXPECT_EQ(s.rows.back().closing, 0.0);
}

TEST(Loan, ZeroRate) {
  const auto s = build_schedule_at_rate(1200, 0.0, 12);
  for (const auto& r : s.rows) EXPECT_NEAR(r.payment, 100.0, 1e-12);
  EXPECT_NEAR(implied_monthly_rate(s).monthly, 0.0, 1e-10);
}

TEST(Loan, AprAuditLoop) {
  const auto s = build_schedule({10000, 0.11995, PeriodicConvention::UkEffectiveRoot, 60, 0});
  const auto implied = implied_monthly_rate(s);
  EXPECT_NEAR(implied.monthly, 0.009485037319073352, 1e-8);
  EXPECT_EQ(advertised_apr(implied.effective_annual), 0.119);
}

TEST(Loan, Validation) {
  EXPECT_THROW(build_schedule({0, 0.1, PeriodicConvention::UkEffectiveRoot, 12, 0}), ValidationError);
  EXPECT_THROW(build_schedule({1000, 0.1, PeriodicConvention::UkEffectiveRoot, 0, 0}), ValidationError);
  EXPECT_THROW(build_schedule({1000, 0.1, PeriodicConvention::UkEffectiveRoot, 12, 12}), ValidationError);
  EXPECT_THROW(build_schedule({1000, 0.1, PeriodicConvention::UkEffectiveRoot, 12, -1}), ValidationError);
  EXPECT_THROW(implied_monthly_rate(1000, std::vector<Money>{0, 0}), DomainError);
  // 1 paid back on 1000 needs a rate far below -50% per month
  EXPECT_THROW(implied_monthly_rate(1000, std::vector<Money>{1}), NoSolutionError);
}

TEST(Loan, VerifyAgainstItselfAndPerturbed) {
  const auto s = build_schedule_at_rate(10000, 0.01, 24);
  EXPECT_TRUE(verify_schedule(s, s, 0.005).empty());

  auto table = PublishedTable::from_schedule(s);
  *table.rows[9].payment += 0.01;
  const auto diffs = verify_schedule(s, table, 0.005);
  ASSERT_EQ(diffs.size(), 1u);
  EXPECT_EQ(diffs[0].month, 10);
  ASSERT_TRUE(diffs[0].payment_delta);
  EXPECT_NEAR(*diffs[0].payment_delta, -0.01, 1e-9);
  EXPECT_FALSE(diffs[0].interest_delta);
}

TEST(Loan, VerifyFlagsConventionMismatch) {
  const auto uk = build_schedule({10000, kEffective12, PeriodicConvention::UkEffectiveRoot, 60, 0});
  const auto us = build_schedule({10000, kEffective12, PeriodicConvention::UsNominalDivide, 60, 0});
  const auto diffs = verify_schedule(us, uk, 0.005);
  ASSERT_FALSE(diffs.empty());
  int positive_payment = 0;
  for (const auto& d : diffs)
    if (d.payment_delta && *d.payment_delta > 0) ++positive_payment;
  EXPECT_GE(positive_payment, 59);
}

TEST(Loan, VerifyReportsLength) {
  const auto a = build_schedule_at_rate(1000, 0.01, 12);
  const auto b = build_schedule_at_rate(1000, 0.01, 13);
  const auto diffs = verify_schedule(a, b, 1e9);
  ASSERT_EQ(diffs.size(), 1u);
  EXPECT_EQ(diffs[0].kind, RowDiscrepancy::Kind::Length);
  EXPECT_EQ(diffs[0].candidate_rows, 12u);
  EXPECT_EQ(diffs[0].published_rows, 13u);
}

TEST(Loan, CsvRoundTrip) {
  const auto s = build_schedule({10000, kEffective12, PeriodicConvention::UkEffectiveRoot, 12, 2});
  std::stringstream buf;
  write_csv(buf, s);
  const auto table = read_published_table(buf);
  ASSERT_EQ(table.rows.size(), s.rows.size());
  EXPECT_TRUE(verify_schedule(s, table, 0.0).empty());
}

TEST(Loan, PublishedTableSubsetsAndErrors) {
  std::istringstream partial("month,payment\n1,888.49\n2,888.49\n");
  const auto t = read_published_table(partial);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_FALSE(t.rows[0].closing);
  const auto diffs = verify_schedule(build_schedule_at_rate(10000, 0.01, 2), t, 0.005);
  ASSERT_EQ(diffs.size(), 2u);
  for (const auto& d : diffs) {
    EXPECT_TRUE(d.payment_delta);
    EXPECT_FALSE(d.interest_delta);
    EXPECT_FALSE(d.closing_delta);
  }
  std::istringstream unknown("month,fee\n1,3\n");
  EXPECT_THROW(read_published_table(unknown), LoadError);
  std::istringstream no_month("payment\n1\n");
  EXPECT_THROW(read_published_table(no_month), LoadError);
}

TEST(LoanProperty, ImpliedRateRoundTrip) {
  auto g = testing_support::rng(51);
  for (int i = 0; i < 100; ++i) {
    const auto spec = random_spec(g);
    const auto s = build_schedule(spec);
    EXPECT_NEAR(implied_monthly_rate(s).monthly, periodic_rate(spec.quoted_annual, 12, spec.convention), 1e-8);
  }
}

TEST(LoanProperty, Conservation) {
  auto g = testing_support::rng(52);
  for (int i = 0; i < 100; ++i) {
    const auto spec = random_spec(g);
    const auto s = build_schedule(spec);
    const Rate r = s.monthly_rate;
    const Money capitalised = spec.principal * std::pow(1.0 + r, spec.holiday_months);
    Money interest = 0.0, paid = 0.0;
    for (const auto& row : s.rows) {
      interest += row.interest;
      paid += row.payment;
    }
    EXPECT_NEAR(sum_principal(s), capitalised, 1e-6 * spec.principal);
    EXPECT_NEAR(interest, paid - spec.principal, 1e-6 * spec.principal);
    EXPECT_EQ(s.rows.back().closing, 0.0);
  }
}

TEST(LoanProperty, NoHolidayMatchesAnnuity) {
  auto g = testing_support::rng(53);
  for (int i = 0; i < 100; ++i) {
    auto spec = random_spec(g);
    spec.holiday_months = 0;
    const auto s = build_schedule(spec);
    const Money level = -pmt(s.monthly_rate, spec.term_months, spec.principal);
    for (std::size_t k = 0; k + 1 < s.rows.size(); ++k) EXPECT_EQ(s.rows[k].payment, level);
    EXPECT_NEAR(s.rows.back().payment, level, 1e-6 * spec.principal);
  }
}

TEST(LoanProperty, PaymentMonotoneInRate) {
  auto g = testing_support::rng(54);
  for (int i = 0; i < 100; ++i) {
    auto spec = random_spec(g);
    auto higher = spec;
    higher.quoted_annual += testing_support::uniform(g, 0.0, 0.1);
    const auto a = build_schedule(spec), b = build_schedule(higher);
    EXPECT_GE(b.rows[static_cast<std::size_t>(spec.holiday_months)].payment,
              a.rows[static_cast<std::size_t>(spec.holiday_months)].payment);
  }
}
