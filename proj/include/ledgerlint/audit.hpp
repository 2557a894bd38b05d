#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ledgerlint/daycount.hpp"
#include "ledgerlint/error.hpp"
#include "ledgerlint/formula/evaluate.hpp"
#include "ledgerlint/formula/functions.hpp"
#include "ledgerlint/formula/printer.hpp"
#include "ledgerlint/sheet.hpp"

namespace ledgerlint::audit {

enum class Severity { Info, Warning, Error };

constexpr std::string_view to_string(Severity s) noexcept {
  switch (s) {
    case Severity::Info: return "info";
    case Severity::Warning: return "warning";
    case Severity::Error: return "error";
  }
  return "?";
}

inline std::optional<Severity> parse_severity(std::string_view s) {
  if (s == "info") return Severity::Info;
  if (s == "warning") return Severity::Warning;
  if (s == "error") return Severity::Error;
  return std::nullopt;
}

struct RuleInfo {
  std::string_view id;    // R1..R8
  std::string_view name;  // NPV-PERIOD0, ...
  Severity default_severity;
  std::string_view explanation;
};

inline constexpr std::array<RuleInfo, 8> kRules = {{
    {"R1", "NPV-PERIOD0", Severity::Warning,
     "NPV discounts every value it is given, treating the first as arriving one full period from now. "
     "An initial investment made today is already in present-value terms and must not be discounted. "
     "Financially, net present value is the undiscounted period-0 flow plus the discounted later flows. "
     "Correction: keep the period-0 flow outside the call, e.g. =A1+NPV(rate, A2:A10), or use XNPV "
     "with dates, which leaves its first flow undiscounted. This rule is a heuristic: a genuinely "
     "negative first-period flow also triggers it."},
    {"R2", "RATE-DIV-12", Severity::Info,
     "Dividing an annual rate by 12 is only correct when the annual figure is a nominal rate "
     "(periodic rate times periods). Effective annual rates, as quoted under UK practice, already "
     "include monthly compounding; dividing them by 12 gives a monthly rate that is too high. "
     "Correction: decide whether the quote is effective or nominal. For an effective rate use "
     "(1+rate)^(1/12)-1, or convert with NOMINAL(rate,12)/12; EFFECT and NOMINAL convert between "
     "the two conventions."},
    {"R3", "INTRATE-COMPOUND", Severity::Warning,
     "INTRATE returns a simple-interest rate: total gain divided by the investment, divided by the "
     "year fraction. Over periods longer than a year that is not the compound annual rate an investor "
     "earns (110 back on 100 over two years is 5% simple but about 4.88% compound). "
     "Correction: for multi-year holdings compute (redemption/investment)^(1/years)-1."},
    {"R4", "DB-MONTH", Severity::Warning,
     "DB's month argument gives the number of months in service in the first year. It only makes sense "
     "when periods are years, and it shifts the remaining depreciation into an extra period after the "
     "stated life (period life+1) that must be requested explicitly. Even with that period the totals "
     "do not reconcile to cost minus salvage, because DB also rounds its rate to three decimals. "
     "Correction: schedule life+1 periods and reconcile the residual explicitly."},
    {"R5", "RATE-MAGNITUDE", Severity::Error,
     "An interest-rate argument of 1 or more means 100% or more per period. This is almost always a "
     "percentage typed as a whole number (12 instead of 12% or 0.12), which makes the result a "
     "hundred times off. Correction: enter the rate as 12% or 0.12."},
    {"R6", "DATE-AS-ARITHMETIC", Severity::Error,
     "A chain like 01/01/80 typed into a formula is not a date: it is evaluated as two divisions "
     "(1/1/80 = 0.0125). Functions that expect a date then receive a tiny serial number. "
     "Correction: put the date in a cell as a date value (ISO YYYY-MM-DD) and reference it."},
    {"R7", "BASIS-DEFAULT", Severity::Info,
     "The basis argument was omitted, so the function silently falls back to its default, the US (NASD) "
     "30/360 day count. "
     "The European 30/360 method treats a 31st as the 30th unconditionally, while the US method only "
     "adjusts an end date of the 31st when the start date is the 30th or 31st; actual/actual, "
     "actual/360 and actual/365 count true elapsed days. Correction: state the basis the instrument "
     "uses explicitly (0 US 30/360, 1 actual/actual, 2 actual/360, 3 actual/365, 4 European 30/360)."},
    {"R8", "DIVISOR-360", Severity::Info,
     "An actual number of elapsed days divided by 360 mixes two day-count conventions: actual days in the "
     "numerator and a 30/360 year in the denominator. The year fraction comes out about 1.4% larger "
     "than actual/365, which inflates interest charged to the borrower. Correction: use actual/365 "
     "(or actual/actual) with actual days, or a 30/360 day count with 360."},
}};

inline const RuleInfo* find_rule(std::string_view id_or_name) {
  for (const auto& r : kRules)
    if (r.id == id_or_name || r.name == id_or_name) return &r;
  return nullptr;
}

/// Explanation for a rule, accepting either its id ("R2") or name
/// ("RATE-DIV-12"). Throws LookupError for anything else.
inline std::string explain_rule(std::string_view id_or_name) {
  const RuleInfo* r = find_rule(id_or_name);
  if (!r) throw LookupError("unknown rule '" + std::string(id_or_name) + "'");
  return std::string(r->id) + " " + std::string(r->name) + ": " + std::string(r->explanation);
}

struct Evidence {
  CellAddress cell;
  CellValue value;
};

struct Finding {
  std::string rule_id;
  std::string rule_name;
  Severity severity = Severity::Info;
  CellAddress cell;
  std::string message;
  std::vector<Evidence> evidence;
};

struct RuleConfig {
  std::set<std::string> enabled = all_rules();
  double rate_magnitude_cutoff = 1.0;
  double intrate_year_fraction_cutoff = 1.0;
  std::map<std::string, Severity> severity_overrides;

  static std::set<std::string> all_rules() {
    std::set<std::string> ids;
    for (const auto& r : kRules) ids.emplace(r.id);
    return ids;
  }

  bool is_enabled(std::string_view id) const { return enabled.count(std::string(id)) != 0; }

  Severity severity_of(const RuleInfo& r) const {
    auto it = severity_overrides.find(std::string(r.id));
    return it == severity_overrides.end() ? r.default_severity : it->second;
  }

  void validate() const {
    if (!(rate_magnitude_cutoff > 0.0)) throw ValidationError("rate_magnitude threshold must be positive");
    if (!(intrate_year_fraction_cutoff > 0.0)) throw ValidationError("intrate_year_fraction threshold must be positive");
    for (const auto& id : enabled)
      if (!find_rule(id)) throw ValidationError("unknown rule '" + id + "'");
    for (const auto& [id, sev] : severity_overrides)
      if (!find_rule(id)) throw ValidationError("unknown rule '" + id + "'");
  }

  // Canonical id for a rule named by id or name.
  static std::string rule_id(std::string_view id_or_name) {
    const RuleInfo* r = find_rule(id_or_name);
    if (!r) throw ValidationError("unknown rule '" + std::string(id_or_name) + "'");
    return std::string(r->id);
  }

  /// Reads a JSON rule configuration:
  ///
  ///   {"enabled": ["R1", ...], "disabled": ["R8"],
  ///    "thresholds": {"rate_magnitude": 1.0, "intrate_year_fraction": 1.0},
  ///    "severity": {"R2": "warning"}}
  ///
  /// Every key is optional; rules may be named by id or name.
  static RuleConfig from_json(std::string_view text) {
    RuleConfig cfg;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("rule config: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("rule config must be a JSON object");
    try {
      if (j.contains("enabled")) {
        cfg.enabled.clear();
        for (const auto& id : j.at("enabled")) cfg.enabled.insert(rule_id(id.get<std::string>()));
      }
      if (j.contains("disabled"))
        for (const auto& id : j.at("disabled")) cfg.enabled.erase(rule_id(id.get<std::string>()));
      if (j.contains("thresholds")) {
        const auto& t = j.at("thresholds");
        if (t.contains("rate_magnitude")) cfg.rate_magnitude_cutoff = t.at("rate_magnitude").get<double>();
        if (t.contains("intrate_year_fraction"))
          cfg.intrate_year_fraction_cutoff = t.at("intrate_year_fraction").get<double>();
      }
      if (j.contains("severity")) {
        for (const auto& [id, sev] : j.at("severity").items()) {
          auto s = parse_severity(sev.get<std::string>());
          if (!s) throw ValidationError("rule config: unknown severity '" + sev.get<std::string>() + "'");
          cfg.severity_overrides[rule_id(id)] = *s;
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("rule config: ") + e.what());
    }
    cfg.validate();
    return cfg;
  }
};

namespace detail {

using formula::Binary;
using formula::BinaryOp;
using formula::Call;
using formula::CallArgs;
using formula::CellRef;
using formula::EvalSignal;
using formula::Node;
using formula::NumberLit;

// Per-formula context shared by the rules.
class RuleContext {
 public:
  RuleContext(const Sheet& sheet, CellAddress cell, const RuleConfig& config)
      : cell_(cell), config_(config), ev_(sheet, sheet.values(), {sheet.evaluated_mode()}) {}

  const formula::Evaluator& evaluator() const noexcept { return ev_; }
  const RuleConfig& config() const noexcept { return config_; }
  CellAddress cell() const noexcept { return cell_; }

  void report(const RuleInfo& rule, std::string message, std::vector<Evidence> evidence = {}) {
    findings_.push_back({std::string(rule.id), std::string(rule.name), config_.severity_of(rule), cell_,
                         std::move(message), std::move(evidence)});
  }

  // Where a value came from: the referenced cell, or the formula cell itself.
  CellAddress origin(const Node& n) const {
    if (auto r = n.as<CellRef>()) return r->cell;
    return cell_;
  }

  std::vector<Finding> take() { return std::move(findings_); }

 private:
  CellAddress cell_;
  const RuleConfig& config_;
  formula::Evaluator ev_;
  std::vector<Finding> findings_;
};

inline bool is_number(const Node& n, double v) {
  auto lit = n.as<NumberLit>();
  return lit && lit->value == v;
}

inline std::optional<double> whole_literal(const Node& n) {
  auto lit = n.as<NumberLit>();
  if (!lit || lit->value != std::floor(lit->value)) return std::nullopt;
  return lit->value;
}

inline std::optional<double> numeric(const CellValue& v) {
  if (auto d = std::get_if<double>(&v)) return *d;
  if (auto d = std::get_if<Date>(&v)) return to_serial(*d);
  return std::nullopt;
}

// R1: NPV whose first value is negative and nothing is added outside it.
inline void rule_npv_period0(RuleContext& ctx, const Node& node, const Node* parent) {
  auto call = node.as<Call>();
  if (!call || call->name != "NPV") return;
  if (parent) {
    if (auto b = parent->as<Binary>(); b && (b->op == BinaryOp::Add || b->op == BinaryOp::Sub)) return;
  }
  for (std::size_t i = 1; i < call->args.size(); ++i) {
    const Node& arg = *call->args[i];
    if (arg.is<formula::EmptyArg>()) continue;
    std::vector<formula::ArgValue> vals;
    try {
      vals = ctx.evaluator().flatten(arg);
    } catch (const EvalSignal&) {
      return;
    }
    for (const auto& v : vals) {
      auto x = numeric(v.value);
      if (!x) continue;
      if (*x < 0.0) {
        const CellAddress where = v.cell.value_or(ctx.cell());
        ctx.report(kRules[0],
                   "NPV discounts its first value (" + where.str() + " = " + format_number(*x) +
                       ") by a full period; a period-0 outlay belongs outside the call",
                   {{where, v.value}});
      }
      return;
    }
  }
}

// R2: NPV/PMT rate argument written as X/12.
inline void rule_rate_div_12(RuleContext& ctx, const Node& node, const Node*) {
  auto call = node.as<Call>();
  if (!call || (call->name != "NPV" && call->name != "PMT") || call->args.empty()) return;
  auto div = call->args[0]->as<Binary>();
  if (!div || div->op != BinaryOp::Div || !is_number(*div->rhs, 12.0)) return;
  std::vector<Evidence> evidence;
  if (auto r = div->lhs->as<CellRef>()) {
    try {
      if (auto v = ctx.evaluator().resolve(r->cell)) evidence.push_back({r->cell, *v});
    } catch (const EvalSignal&) {
    }
  }
  ctx.report(kRules[1],
             call->name + " rate " + formula::print_expr(*call->args[0]) +
                 " divides an annual rate by 12; if the quote is an effective rate the monthly rate is overstated",
             std::move(evidence));
}

// R3: INTRATE over more than the configured year fraction.
inline void rule_intrate_compound(RuleContext& ctx, const Node& node, const Node*) {
  auto call = node.as<Call>();
  if (!call || call->name != "INTRATE" || call->args.size() < 2) return;
  const auto* info = formula::find_function("INTRATE");
  try {
    const CallArgs args(ctx.evaluator(), *call, info->params);
    const Date settlement = args.date(0);
    const Date maturity = args.date(1);
    if (!(settlement < maturity)) return;
    const double years = year_fraction(settlement, maturity, formula::detail::basis_arg(args, 4));
    if (years <= ctx.config().intrate_year_fraction_cutoff) return;
    ctx.report(kRules[2],
               "INTRATE spans " + format_number(years) +
                   " years; it returns a simple-interest rate, not the compound annual rate",
               {{ctx.origin(*call->args[0]), settlement}, {ctx.origin(*call->args[1]), maturity}});
  } catch (const EvalSignal&) {
  } catch (const Error&) {
  }
}

// R4: DB with a month argument below 12.
inline void rule_db_month(RuleContext& ctx, const Node& node, const Node*) {
  auto call = node.as<Call>();
  if (!call || call->name != "DB" || call->args.size() < 5 || call->args[4]->is<formula::EmptyArg>()) return;
  const auto* info = formula::find_function("DB");
  try {
    const CallArgs args(ctx.evaluator(), *call, info->params);
    const double month = args.number(4);
    if (!(month < 12.0)) return;
    ctx.report(kRules[3],
               "DB month " + format_number(month) +
                   " < 12 adds an extra final period (life+1) and the totals will not reconcile to salvage",
               {{ctx.origin(*call->args[4]), month}});
  } catch (const EvalSignal&) {
  }
}

// R5: rate-position argument >= cutoff.
inline void rule_rate_magnitude(RuleContext& ctx, const Node& node, const Node*) {
  auto call = node.as<Call>();
  if (!call) return;
  const auto* info = formula::find_function(call->name);
  if (!info) return;
  const CallArgs args(ctx.evaluator(), *call, info->params);
  for (std::size_t pos : info->rate_positions) {
    if (args.omitted(pos)) continue;
    double rate = 0.0;
    try {
      rate = args.number(pos);
    } catch (const EvalSignal&) {
      continue;
    }
    if (rate < ctx.config().rate_magnitude_cutoff) continue;
    ctx.report(kRules[4],
               args.name(pos) + " is " + format_number(rate) + " (" + format_number(rate * 100.0) +
                   "% per period); probably a percentage entered as a whole number",
               {{ctx.origin(*call->args[pos]), rate}});
  }
}

inline bool plausible_year(double y) { return (y >= 0 && y <= 99) || (y >= kMinYear && y <= kMaxYear); }

// R6: a/b/c over whole literals that read as a date.
inline void rule_date_as_arithmetic(RuleContext& ctx, const Node& node, const Node*) {
  auto outer = node.as<Binary>();
  if (!outer || outer->op != BinaryOp::Div) return;
  auto inner = outer->lhs->as<Binary>();
  if (!inner || inner->op != BinaryOp::Div) return;
  const auto a = whole_literal(*inner->lhs), b = whole_literal(*inner->rhs), c = whole_literal(*outer->rhs);
  if (!a || !b || !c) return;
  const bool day_month = *a >= 1 && *a <= 31 && *b >= 1 && *b <= 12;
  const bool month_day = *a >= 1 && *a <= 12 && *b >= 1 && *b <= 31;
  if (!(day_month || month_day) || !plausible_year(*c)) return;
  const double value = *a / *b / *c;
  ctx.report(kRules[5],
             formula::print_expr(node) + " looks like a date but is evaluated as division (= " + format_number(value) +
                 ")",
             {{ctx.cell(), value}});
}

// R7: accrual-family call with the basis omitted.
inline void rule_basis_default(RuleContext& ctx, const Node& node, const Node*) {
  auto call = node.as<Call>();
  if (!call) return;
  const auto* info = formula::find_function(call->name);
  if (!info || !info->basis_position) return;
  const std::size_t pos = *info->basis_position;
  if (pos < call->args.size() && !call->args[pos]->is<formula::EmptyArg>()) return;
  ctx.report(kRules[6], call->name + " omits its " + std::string(info->params[pos]) +
                            " argument and silently uses US (NASD) 30/360");
}

// R8: (date - date) / 360.
inline void rule_divisor_360(RuleContext& ctx, const Node& node, const Node*) {
  auto div = node.as<Binary>();
  if (!div || div->op != BinaryOp::Div || !is_number(*div->rhs, 360.0)) return;
  auto diff = div->lhs->as<Binary>();
  if (!diff || diff->op != BinaryOp::Sub) return;
  try {
    const CellValue later = ctx.evaluator().eval(*diff->lhs);
    const CellValue earlier = ctx.evaluator().eval(*diff->rhs);
    if (!std::holds_alternative<Date>(later) || !std::holds_alternative<Date>(earlier)) return;
    ctx.report(kRules[7],
               "actual elapsed days (" + formula::print_expr(*div->lhs) +
                   ") divided by 360 overstates the year fraction relative to actual/365",
               {{ctx.origin(*diff->lhs), later}, {ctx.origin(*diff->rhs), earlier}});
  } catch (const EvalSignal&) {
  }
}

using RuleFn = void (*)(RuleContext&, const Node&, const Node*);

inline constexpr std::array<RuleFn, 8> kRuleFns = {rule_npv_period0,  rule_rate_div_12,   rule_intrate_compound,
                                                   rule_db_month,     rule_rate_magnitude, rule_date_as_arithmetic,
                                                   rule_basis_default, rule_divisor_360};

}  // namespace detail

/// Runs the enabled rules over every formula cell of an evaluated sheet.
/// Findings come back ordered by cell (row-major), then rule id, then the
/// order of the matching node within the formula. Rules read the sheet only
/// and never fail; a rule that cannot evaluate what it needs skips.
inline std::vector<Finding> run_rules(const Sheet& sheet, const RuleConfig& config) {
  if (!sheet.evaluated()) throw Error("run_rules needs an evaluated sheet");
  config.validate();
  std::vector<Finding> out;
  for (const auto& [addr, cell] : sheet.cells()) {
    if (!cell.formula) continue;
    for (std::size_t r = 0; r < kRules.size(); ++r) {
      if (!config.is_enabled(kRules[r].id)) continue;
      detail::RuleContext ctx(sheet, addr, config);
      formula::walk(cell.formula, [&](const formula::Node& n, const formula::Node* parent) {
        detail::kRuleFns[r](ctx, n, parent);
      });
      for (auto& f : ctx.take()) out.push_back(std::move(f));
    }
  }
  return out;
}

// Evaluates the sheet if needed, then runs the rules.
inline std::vector<Finding> audit_sheet(Sheet& sheet, const RuleConfig& config = {},
                                        formula::EvalOptions options = {}) {
  if (!sheet.evaluated() || sheet.evaluated_mode() != options.mode) formula::evaluate_sheet(sheet, options);
  return run_rules(sheet, config);
}

inline Severity worst_severity(const std::vector<Finding>& findings) {
  Severity worst = Severity::Info;
  for (const auto& f : findings) worst = std::max(worst, f.severity);
  return worst;
}

}  // namespace ledgerlint::audit
