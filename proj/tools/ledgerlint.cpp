// ledgerlint: command-line front end for the financial library and the
// workbook audit engine.
//
//   ledgerlint eval "=EFFECT(0.12,12)"
//   ledgerlint audit book.csv other.csv
//   ledgerlint schedule --principal 10000 --rate 12.6825% --term 60 --convention uk
//   ledgerlint depr --cost 1000000 --salvage 100000 --life 6 --mode compat
//
// Exit codes: 0 success/clean, 1 findings or discrepancies, 2 invalid input.

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ledgerlint/audit.hpp"
#include "ledgerlint/depreciation.hpp"
#include "ledgerlint/formula/evaluate.hpp"
#include "ledgerlint/loan.hpp"
#include "ledgerlint/numfmt.hpp"
#include "ledgerlint/rates.hpp"
#include "ledgerlint/report.hpp"

namespace {

using namespace ledgerlint;

constexpr int kExitOk = 0;
constexpr int kExitFindings = 1;
constexpr int kExitInvalid = 2;

struct GlobalOptions {
  std::string mode = "exact";
  std::string format = "text";
  std::string convention = "uk";

  PrecisionMode precision() const { return mode == "compat" ? PrecisionMode::Compat : PrecisionMode::Exact; }
  bool structured() const { return format == "structured"; }
  PeriodicConvention periodic() const {
    return convention == "us" ? PeriodicConvention::UsNominalDivide : PeriodicConvention::UkEffectiveRoot;
  }
};

// Thrown for bad flag values; message names the flag.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double number_flag(const std::string& flag, const std::string& text) {
  auto v = parse_number(text);
  if (!v) throw UsageError(flag + ": '" + text + "' is not a number");
  return *v;
}

int whole_flag(const std::string& flag, const std::string& text) {
  const double v = number_flag(flag, text);
  if (v != static_cast<double>(static_cast<long long>(v)) || v < -1e9 || v > 1e9)
    throw UsageError(flag + ": '" + text + "' is not a whole number");
  return static_cast<int>(v);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---- eval ------------------------------------------------------------------

struct EvalCommand {
  std::string expr;
  std::vector<std::string> bindings;

  int run(const GlobalOptions& g) const {
    Sheet sheet;
    for (const auto& b : bindings) {
      const auto eq = b.find('=');
      auto addr = eq == std::string::npos ? std::nullopt : parse_address(b.substr(0, eq));
      if (!addr) throw UsageError("--bind: expected CELL=VALUE, got '" + b + "'");
      sheet.set(*addr, b.substr(eq + 1));
    }
    const CellValue v = formula::evaluate(expr, sheet, {g.precision()});
    if (g.structured()) {
      nlohmann::json j{{"expr", expr}, {"value", audit::value_json(v)}};
      std::cout << j.dump() << '\n';
    } else if (auto e = as_error(v)) {
      std::cerr << "ledgerlint: " << to_display(*e) << '\n';
    } else {
      std::cout << to_display(v) << '\n';
    }
    return is_error(v) ? kExitInvalid : kExitOk;
  }
};

// ---- audit -----------------------------------------------------------------

struct AuditCommand {
  std::vector<std::string> files;
  std::vector<std::string> enable;
  std::vector<std::string> disable;
  std::string rules_file;
  std::string explain;

  audit::RuleConfig config() const {
    audit::RuleConfig cfg;
    std::string path = rules_file;
    if (path.empty())
      if (const char* env = std::getenv("LEDGERLINT_RULES")) path = env;
    if (!path.empty()) cfg = audit::RuleConfig::from_json(slurp(path));
    if (!enable.empty()) {
      cfg.enabled.clear();
      for (const auto& id : enable) cfg.enabled.insert(audit::RuleConfig::rule_id(id));
    }
    for (const auto& id : disable) cfg.enabled.erase(audit::RuleConfig::rule_id(id));
    return cfg;
  }

  struct FileResult {
    std::string output;
    std::string error;
    audit::Severity worst = audit::Severity::Info;
    bool any = false;
  };

  static FileResult audit_one(const std::string& file, const audit::RuleConfig& cfg, const GlobalOptions& g) {
    FileResult r;
    try {
      Sheet sheet = load_workbook(file);
      const auto findings = audit::audit_sheet(sheet, cfg, {g.precision()});
      std::ostringstream os;
      audit::write_report(os, file, findings,
                          g.structured() ? audit::ReportFormat::Structured : audit::ReportFormat::Text);
      r.output = os.str();
      r.any = !findings.empty();
      r.worst = audit::worst_severity(findings);
    } catch (const Error& e) {
      r.error = e.what();
    }
    return r;
  }

  int run(const GlobalOptions& g) const {
    if (!explain.empty()) {
      std::cout << audit::explain_rule(explain) << '\n';
      return kExitOk;
    }
    if (files.empty()) throw UsageError("audit: no workbook given");
    const auto cfg = config();
    // Files are independent; run them concurrently and print in input order.
    std::vector<std::future<FileResult>> jobs;
    for (const auto& f : files)
      jobs.push_back(std::async(std::launch::async, audit_one, f, std::cref(cfg), std::cref(g)));
    int code = kExitOk;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const FileResult r = jobs[i].get();
      if (!r.error.empty()) {
        std::cerr << "ledgerlint: " << files[i] << ": " << r.error << '\n';
        code = kExitInvalid;
        continue;
      }
      std::cout << r.output;
      if (r.any && r.worst >= audit::Severity::Warning && code == kExitOk) code = kExitFindings;
    }
    return code;
  }
};

// ---- schedule --------------------------------------------------------------

struct ScheduleCommand {
  std::string principal, rate, term, holiday = "0", published, tolerance = "0.005";

  LoanSpec spec(const GlobalOptions& g) const {
    LoanSpec s;
    s.principal = number_flag("--principal", principal);
    if (!(s.principal > 0.0)) throw UsageError("--principal: must be positive");
    auto r = try_parse_rate(rate);
    if (!r) throw UsageError("--rate: '" + rate + "' is not a rate (use 0.12 or 12%)");
    if (!(*r > -1.0)) throw UsageError("--rate: must be greater than -100%");
    s.quoted_annual = *r;
    s.convention = g.periodic();
    s.term_months = whole_flag("--term", term);
    if (s.term_months < 1) throw UsageError("--term: must be at least 1 month");
    s.holiday_months = whole_flag("--holiday", holiday);
    if (s.holiday_months < 0) throw UsageError("--holiday: must be non-negative");
    if (s.holiday_months >= s.term_months) throw UsageError("--holiday: must be shorter than --term");
    return s;
  }

  int run(const GlobalOptions& g) const {
    const auto schedule = build_schedule(spec(g));
    if (published.empty()) {
      write_csv(std::cout, schedule);
      return kExitOk;
    }
    const double tol = number_flag("--tolerance", tolerance);
    if (!(tol >= 0.0)) throw UsageError("--tolerance: must be non-negative");
    std::ifstream in(published, std::ios::binary);
    if (!in) throw LoadError("cannot open published table '" + published + "'");
    const auto table = read_published_table(in);
    const auto diffs = verify_schedule(schedule, table, tol);
    report(diffs, g);
    return diffs.empty() ? kExitOk : kExitFindings;
  }

  static void report(const std::vector<RowDiscrepancy>& diffs, const GlobalOptions& g) {
    auto delta = [](const std::optional<Money>& d) { return d ? format_number(*d) : std::string(); };
    if (g.structured()) {
      for (const auto& d : diffs) {
        nlohmann::json j;
        if (d.kind == RowDiscrepancy::Kind::Length) {
          j = {{"kind", "length"}, {"candidate_rows", d.candidate_rows}, {"published_rows", d.published_rows}};
        } else {
          j = {{"kind", "values"}, {"month", d.month}};
          if (d.payment_delta) j["payment_delta"] = *d.payment_delta;
          if (d.interest_delta) j["interest_delta"] = *d.interest_delta;
          if (d.closing_delta) j["closing_delta"] = *d.closing_delta;
        }
        std::cout << j.dump() << '\n';
      }
      return;
    }
    if (diffs.empty()) {
      std::cout << "schedule matches published table\n";
      return;
    }
    std::cout << "month,payment_delta,interest_delta,closing_delta\n";
    for (const auto& d : diffs) {
      if (d.kind == RowDiscrepancy::Kind::Length) {
        std::cout << "# row count differs: computed " << d.candidate_rows << ", published " << d.published_rows
                  << '\n';
        continue;
      }
      std::cout << d.month << ',' << delta(d.payment_delta) << ',' << delta(d.interest_delta) << ','
                << delta(d.closing_delta) << '\n';
    }
  }
};

// ---- depr ------------------------------------------------------------------

struct DeprCommand {
  std::string cost, salvage, life, month = "12";

  DepreciationSpec spec() const {
    DepreciationSpec s;
    s.cost = number_flag("--cost", cost);
    if (!(s.cost > 0.0)) throw UsageError("--cost: must be positive");
    s.salvage = number_flag("--salvage", salvage);
    if (s.salvage < 0.0) throw UsageError("--salvage: must be non-negative");
    if (s.salvage > s.cost) throw UsageError("--salvage: exceeds --cost");
    s.life = whole_flag("--life", life);
    if (s.life < 1) throw UsageError("--life: must be at least 1");
    s.month = whole_flag("--month", month);
    if (s.month < 1 || s.month > 12) throw UsageError("--month: must be in 1-12");
    return s;
  }

  int run(const GlobalOptions& g) const {
    const auto s = spec();
    const auto schedule = db_schedule(s, g.precision());
    const auto rec = reconcile(schedule, s);
    write_csv(std::cout, schedule);
    if (schedule.rate_saturated) std::cout << "# note: salvage 0 saturates the rate at 1 (full write-off)\n";
    std::cout << "# reconcile mode=" << to_string(g.precision()) << " rate=" << format_number(schedule.rate)
              << " total_depreciation=" << format_number(rec.total_depreciation)
              << " residual=" << format_number(rec.residual_book_value) << " salvage=" << format_number(s.salvage)
              << " gap=" << format_number(rec.gap) << " status=" << (rec.flagged ? "MISMATCH" : "ok") << '\n';
    return kExitOk;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ledgerlint: spreadsheet financial-function toolkit and auditor"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--mode", g.mode, "Precision mode")->check(CLI::IsMember({"compat", "exact"}))->capture_default_str();
  app.add_option("--format", g.format, "Report format")
      ->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();
  app.add_option("--convention", g.convention, "Periodic-rate convention (us: annual/12, uk: effective root)")
      ->check(CLI::IsMember({"us", "uk"}))
      ->capture_default_str();

  EvalCommand eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a formula");
  eval_cmd->add_option("expr", eval.expr, "Formula, starting with '='")->required();
  eval_cmd->add_option("--bind", eval.bindings, "Cell binding CELL=VALUE (repeatable)")->allow_extra_args(false);

  AuditCommand aud;
  auto* audit_cmd = app.add_subcommand("audit", "Audit CSV workbooks for financial-function misuse");
  audit_cmd->add_option("files", aud.files, "Workbook CSV files");
  audit_cmd->add_option("--enable", aud.enable, "Run only these rules (repeatable)")->allow_extra_args(false);
  audit_cmd->add_option("--disable", aud.disable, "Skip these rules (repeatable)")->allow_extra_args(false);
  audit_cmd->add_option("--rules", aud.rules_file, "Rule configuration JSON (default: $LEDGERLINT_RULES)");
  audit_cmd->add_option("--explain", aud.explain, "Print the explanation for a rule and exit");

  ScheduleCommand sched;
  auto* sched_cmd = app.add_subcommand("schedule", "Build or verify a loan amortization schedule");
  sched_cmd->add_option("--principal", sched.principal, "Amount advanced")->required();
  sched_cmd->add_option("--rate", sched.rate, "Quoted annual rate, 0.12 or 12%")->required();
  sched_cmd->add_option("--term", sched.term, "Term in months")->required();
  sched_cmd->add_option("--holiday", sched.holiday, "Initial months without payments")->capture_default_str();
  sched_cmd->add_option("--published", sched.published, "Published table CSV to verify against");
  sched_cmd->add_option("--tolerance", sched.tolerance, "Allowed absolute difference per value")
      ->capture_default_str();

  DeprCommand depr;
  auto* depr_cmd = app.add_subcommand("depr", "Declining-balance schedule with reconciliation");
  depr_cmd->add_option("--cost", depr.cost, "Asset cost")->required();
  depr_cmd->add_option("--salvage", depr.salvage, "Salvage value")->required();
  depr_cmd->add_option("--life", depr.life, "Life in periods")->required();
  depr_cmd->add_option("--month", depr.month, "Months in service in the first year")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*eval_cmd) return eval.run(g);
    if (*audit_cmd) return aud.run(g);
    if (*sched_cmd) return sched.run(g);
    if (*depr_cmd) return depr.run(g);
  } catch (const UsageError& e) {
    std::cerr << "ledgerlint: " << e.what() << '\n';
  } catch (const ledgerlint::Error& e) {
    std::cerr << "ledgerlint: " << e.what() << '\n';
  }
  return kExitInvalid;
}
