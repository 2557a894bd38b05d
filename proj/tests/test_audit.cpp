#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "ledgerlint/audit.hpp"
#include "ledgerlint/report.hpp"
#include "support.hpp"

using namespace ledgerlint;
using namespace ledgerlint::audit;
namespace fs = std::filesystem;

namespace {

struct Trap {
  const char* file;
  const char* rule;
  const char* cell;
};

constexpr Trap kTraps[] = {
    {"r1_npv_period0.csv", "R1", "B3"},        {"r2_rate_div_12.csv", "R2", "B2"},
    {"r3_intrate_compound.csv", "R3", "E2"},   {"r4_db_month.csv", "R4", "D2"},
    {"r5_rate_magnitude.csv", "R5", "B3"},     {"r6_date_as_arithmetic.csv", "R6", "B1"},
    {"r7_basis_default.csv", "R7", "C2"},      {"r8_divisor_360.csv", "R8", "E2"},
};

std::vector<Finding> audit_file(const fs::path& path, const RuleConfig& cfg = {}) {
  Sheet s = load_workbook(path.string());
  return audit_sheet(s, cfg);
}

std::vector<fs::path> csv_files(const std::string& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(testing_support::fixture(dir)))
    if (e.path().extension() == ".csv") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<fs::path> all_fixtures() {
  auto files = csv_files("audit/traps");
  for (auto& f : csv_files("audit/clean")) files.push_back(f);
  return files;
}

using Key = std::tuple<std::string, std::string, std::string>;  // file, cell, rule

std::vector<Key> keys(const fs::path& file, const std::vector<Finding>& fs) {
  std::vector<Key> out;
  for (const auto& f : fs) out.emplace_back(file.filename().string(), f.cell.str(), f.rule_id);
  return out;
}

Sheet sheet_of(std::string_view csv) { return parse_workbook(csv); }

}  // namespace

TEST(AuditFixtures, EachTrapRaisesOnlyItsRule) {
  for (const auto& t : kTraps) {
    const auto findings = audit_file(testing_support::fixture(std::string("audit/traps/") + t.file));
    ASSERT_EQ(findings.size(), 1u) << t.file;
    EXPECT_EQ(findings[0].rule_id, t.rule) << t.file;
    EXPECT_EQ(findings[0].cell.str(), t.cell) << t.file;
    EXPECT_EQ(findings[0].severity, find_rule(t.rule)->default_severity);
  }
  EXPECT_EQ(csv_files("audit/traps").size(), std::size(kTraps));
}

TEST(AuditFixtures, CleanCorpusIsSilentAndEvaluates) {
  const auto files = csv_files("audit/clean");
  ASSERT_GE(files.size(), 4u);
  for (const auto& f : files) {
    Sheet s = load_workbook(f.string());
    const auto findings = audit_sheet(s);
    EXPECT_TRUE(findings.empty()) << f << ": " << (findings.empty() ? "" : findings[0].message);
    for (const auto& [addr, v] : s.values()) EXPECT_FALSE(is_error(v)) << f << " " << addr.str() << " " << to_display(v);
  }
}

TEST(AuditFixtures, DisablingRemovesExactlyThatRule) {
  for (const auto& f : all_fixtures()) {
    const auto all = keys(f, audit_file(f));
    for (const auto& rule : kRules) {
      RuleConfig cfg;
      cfg.enabled.erase(std::string(rule.id));
      std::vector<Key> expected;
      for (const auto& k : all)
        if (std::get<2>(k) != rule.id) expected.push_back(k);
      EXPECT_EQ(keys(f, audit_file(f, cfg)), expected) << f << " without " << rule.id;
    }
  }
}

TEST(AuditFixtures, RuleSubsetsGiveFindingSubsets) {
  auto g = testing_support::rng(81);
  const auto files = all_fixtures();
  std::map<fs::path, std::vector<Key>> full;
  for (const auto& f : files) full[f] = keys(f, audit_file(f));
  for (int round = 0; round < 40; ++round) {
    RuleConfig cfg;
    cfg.enabled.clear();
    for (const auto& r : kRules)
      if (testing_support::uniform_int(g, 0, 1)) cfg.enabled.insert(std::string(r.id));
    for (const auto& f : files) {
      std::vector<Key> expected;
      for (const auto& k : full[f])
        if (cfg.enabled.count(std::get<2>(k))) expected.push_back(k);
      EXPECT_EQ(keys(f, audit_file(f, cfg)), expected);
    }
  }
}

TEST(AuditFixtures, Deterministic) {
  for (const auto& f : all_fixtures()) {
    std::ostringstream a, b;
    write_report(a, f.string(), audit_file(f), ReportFormat::Structured);
    write_report(b, f.string(), audit_file(f), ReportFormat::Structured);
    EXPECT_EQ(a.str(), b.str());
  }
}

TEST(AuditRules, SpecExamples) {
  Sheet npv = sheet_of("-1000\n200\n300\n400\n500\n\"=NPV(0.1, A1:A5)\"\n");
  const auto r1 = audit_sheet(npv);
  ASSERT_EQ(r1.size(), 1u);
  EXPECT_EQ(r1[0].rule_id, "R1");
  EXPECT_EQ(r1[0].cell.str(), "A6");
  ASSERT_EQ(r1[0].evidence.size(), 1u);
  EXPECT_EQ(r1[0].evidence[0].cell.str(), "A1");

  Sheet pmt = sheet_of("\"=PMT(0.12/12, 60, 10000)\"\n");
  const auto r2 = audit_sheet(pmt);
  ASSERT_EQ(r2.size(), 1u);
  EXPECT_EQ(r2[0].rule_id, "R2");
}

TEST(AuditRules, NpvWithOutsideTermIsClean) {
  Sheet s = sheet_of("-1000,-200,300\n\"=A1+NPV(0.1,B1:C1)\",\"=NPV(0.1,B1:C1)-A1\",\"=-NPV(0.1,B1:C1)\"\n");
  const auto f = audit_sheet(s);
  ASSERT_EQ(f.size(), 1u);  // only the negated call, which has no additive term
  EXPECT_EQ(f[0].cell.str(), "C2");
}

TEST(AuditRules, DateShapes) {
  Sheet s = sheet_of("=12/31/1999,=31/12/99,=100/4/2,=10/20/5000,=1/2/3,=A1/2/3\n");
  std::vector<std::string> cells;
  for (const auto& f : audit_sheet(s)) cells.push_back(f.cell.str() + f.rule_id);
  EXPECT_EQ(cells, (std::vector<std::string>{"A1R6", "B1R6", "E1R6"}));
}

TEST(AuditRules, BasisOmittedOrEmpty) {
  Sheet s = sheet_of(
      "2024-01-15,2024-03-31,\"=DAYS360(A1,B1)\",\"=INTRATE(A1,B1,100,101,)\",\"=INTRATE(A1,B1,100,101,0)\"\n");
  std::vector<std::string> cells;
  for (const auto& f : audit_sheet(s)) cells.push_back(f.cell.str() + f.rule_id);
  EXPECT_EQ(cells, (std::vector<std::string>{"C1R7", "D1R7"}));
}

TEST(AuditRules, RateMagnitudeReadsReferencedCells) {
  Sheet s = sheet_of("12%,12\n\"=PMT(A1,60,1000)\",\"=PMT(B1,60,1000)\"\n");
  const auto f = audit_sheet(s);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].cell.str(), "B2");
  EXPECT_EQ(f[0].severity, Severity::Error);
  EXPECT_EQ(f[0].evidence[0].cell.str(), "B1");
}

TEST(AuditRules, ErrorsNeverAbortRules) {
  Sheet s = sheet_of("=A1,\"=NPV(A1,B2)\",\"=INTRATE(A1,1/0,1,1,1)\",\"=DB(1,2,3,4,Z)\",=PMT(0.1/12\n");
  EXPECT_NO_THROW(audit_sheet(s));
}

TEST(AuditConfig, Thresholds) {
  const auto r5 = testing_support::fixture("audit/traps/r5_rate_magnitude.csv");
  EXPECT_TRUE(audit_file(r5, RuleConfig::from_json(R"({"thresholds": {"rate_magnitude": 20}})")).empty());
  const auto r3 = testing_support::fixture("audit/traps/r3_intrate_compound.csv");
  EXPECT_TRUE(audit_file(r3, RuleConfig::from_json(R"({"thresholds": {"intrate_year_fraction": 3}})")).empty());
}

TEST(AuditConfig, JsonForms) {
  const auto cfg = RuleConfig::from_json(R"({"enabled": ["R1", "RATE-DIV-12"], "disabled": ["R1"],
                                             "severity": {"DIVISOR-360": "error"}})");
  EXPECT_EQ(cfg.enabled, (std::set<std::string>{"R2"}));
  EXPECT_EQ(cfg.severity_of(*find_rule("R8")), Severity::Error);
  EXPECT_THROW(RuleConfig::from_json("{"), ValidationError);
  EXPECT_THROW(RuleConfig::from_json("[]"), ValidationError);
  EXPECT_THROW(RuleConfig::from_json(R"({"enabled": ["R99"]})"), ValidationError);
  EXPECT_THROW(RuleConfig::from_json(R"({"severity": {"R1": "loud"}})"), ValidationError);
  EXPECT_THROW(RuleConfig::from_json(R"({"thresholds": {"rate_magnitude": 0}})"), ValidationError);
}

TEST(AuditConfig, SeverityOverrideShowsInFindings) {
  const auto f = audit_file(testing_support::fixture("audit/traps/r8_divisor_360.csv"),
                            RuleConfig::from_json(R"({"severity": {"R8": "warning"}})"));
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].severity, Severity::Warning);
  EXPECT_EQ(worst_severity(f), Severity::Warning);
}

TEST(Explain, EveryRuleDocumented) {
  for (const auto& r : kRules) {
    EXPECT_FALSE(explain_rule(r.id).empty());
    EXPECT_EQ(explain_rule(r.id), explain_rule(r.name));
  }
  const auto r2 = explain_rule("R2");
  for (auto word : {"effective", "nominal", "EFFECT", "NOMINAL"}) EXPECT_NE(r2.find(word), std::string::npos) << word;
  const auto r7 = explain_rule("R7");
  for (auto word : {"US", "European", "30/360", "default"}) EXPECT_NE(r7.find(word), std::string::npos) << word;
  EXPECT_THROW(explain_rule("R99"), LookupError);
}

TEST(Report, TextAndStructuredAgree) {
  for (const auto& f : all_fixtures()) {
    const auto findings = audit_file(f);
    std::ostringstream text, structured;
    write_report(text, "book.csv", findings, ReportFormat::Text);
    write_report(structured, "book.csv", findings, ReportFormat::Structured);
    std::vector<std::string> from_text, from_json;
    std::istringstream t(text.str()), j(structured.str());
    for (std::string line; std::getline(t, line);) {
      std::istringstream fields(line);
      std::string where, rule;
      fields >> where >> rule;
      from_text.push_back(where + " " + rule);
    }
    for (std::string line; std::getline(j, line);) {
      const auto obj = nlohmann::json::parse(line);
      from_json.push_back(obj["file"].get<std::string>() + ":" + obj["cell"].get<std::string>() + " " +
                          obj["rule_id"].get<std::string>());
    }
    EXPECT_EQ(from_text, from_json);
  }
}

TEST(Report, TextLineShape) {
  const auto findings = audit_file(testing_support::fixture("audit/traps/r6_date_as_arithmetic.csv"));
  ASSERT_EQ(findings.size(), 1u);
  EXPECT_EQ(format_text("book.csv", findings[0]),
            "book.csv:B1 R6 error 1/1/80 looks like a date but is evaluated as division (= 0.0125)");
}
