#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ledgerlint/audit.hpp"
#include "ledgerlint/sheet.hpp"

namespace ledgerlint::audit {

enum class ReportFormat { Text, Structured };

// FILE:CELL RULE SEVERITY MESSAGE
inline std::string format_text(std::string_view file, const Finding& f) {
  return std::string(file) + ":" + f.cell.str() + " " + f.rule_id + " " + std::string(to_string(f.severity)) + " " +
         f.message;
}

inline nlohmann::json value_json(const CellValue& v) {
  if (auto d = std::get_if<double>(&v)) return *d;
  if (auto d = std::get_if<Date>(&v)) return nlohmann::json{{"date", d->iso()}};
  if (auto s = std::get_if<std::string>(&v)) return *s;
  const auto& e = std::get<ErrorValue>(v);
  return nlohmann::json{{"error", std::string(to_string(e.kind))}, {"message", e.message}};
}

inline nlohmann::json to_json(std::string_view file, const Finding& f) {
  nlohmann::json evidence = nlohmann::json::array();
  for (const auto& e : f.evidence) evidence.push_back({{"cell", e.cell.str()}, {"value", value_json(e.value)}});
  return {{"file", std::string(file)},
          {"cell", f.cell.str()},
          {"rule_id", f.rule_id},
          {"rule_name", f.rule_name},
          {"severity", std::string(to_string(f.severity))},
          {"message", f.message},
          {"evidence", std::move(evidence)}};
}

// One line per finding; Structured is JSON Lines.
inline void write_report(std::ostream& os, std::string_view file, const std::vector<Finding>& findings,
                         ReportFormat format) {
  for (const auto& f : findings) {
    if (format == ReportFormat::Text)
      os << format_text(file, f) << '\n';
    else
      os << to_json(file, f).dump() << '\n';
  }
}

}  // namespace ledgerlint::audit
