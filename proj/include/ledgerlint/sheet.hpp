#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <variant>

#include "ledgerlint/address.hpp"
#include "ledgerlint/csv.hpp"
#include "ledgerlint/date.hpp"
#include "ledgerlint/error.hpp"
#include "ledgerlint/formula/ast.hpp"
#include "ledgerlint/formula/parser.hpp"
#include "ledgerlint/numfmt.hpp"
#include "ledgerlint/types.hpp"

namespace ledgerlint {

enum class ErrorKind {
  Cycle,            // cell is on a circular reference
  Propagated,       // a referenced cell holds an error
  UnknownFunction,
  Argument,         // wrong arity or argument type
  Parse,
  DivZero,
  Value,            // operand of the wrong type
  Num,              // financial operation rejected its inputs
};

constexpr std::string_view to_string(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::Cycle: return "#CYCLE!";
    case ErrorKind::Propagated: return "#PROPAGATED!";
    case ErrorKind::UnknownFunction: return "#NAME?";
    case ErrorKind::Argument: return "#ARG!";
    case ErrorKind::Parse: return "#PARSE!";
    case ErrorKind::DivZero: return "#DIV/0!";
    case ErrorKind::Value: return "#VALUE!";
    case ErrorKind::Num: return "#NUM!";
  }
  return "#?";
}

struct ErrorValue {
  ErrorKind kind = ErrorKind::Value;
  std::string message;

  friend bool operator==(const ErrorValue&, const ErrorValue&) = default;
};

// Number | DateValue | Text | ErrorValue
using CellValue = std::variant<double, Date, std::string, ErrorValue>;

inline bool is_error(const CellValue& v) noexcept { return std::holds_alternative<ErrorValue>(v); }
inline const ErrorValue* as_error(const CellValue& v) noexcept { return std::get_if<ErrorValue>(&v); }

// Day 0 of spreadsheet serial numbers is 1899-12-30; 1970-01-01 is 25569.
inline constexpr std::int64_t kSerialEpochOffset = 25569;

inline double to_serial(const Date& d) { return static_cast<double>(d.serial() + kSerialEpochOffset); }

inline std::string to_display(const CellValue& v) {
  struct {
    std::string operator()(double d) const { return format_number(d); }
    std::string operator()(const Date& d) const { return d.iso(); }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(const ErrorValue& e) const {
      return std::string(to_string(e.kind)) + (e.message.empty() ? "" : " " + e.message);
    }
  } visitor;
  return std::visit(visitor, v);
}

/// Literal typing for a non-formula cell: number, ISO date, then text.
/// "12%" is the number 0.12. Slash dates ("01/01/80") stay text.
inline CellValue literal_value(std::string_view text) {
  if (auto n = parse_number(text)) return *n;
  if (text.size() > 1 && text.back() == '%') {
    if (auto n = parse_number(text.substr(0, text.size() - 1))) return *n / 100.0;
  }
  try {
    if (auto d = try_parse_iso_date(text)) return *d;
  } catch (const ValidationError&) {
    // date-shaped but impossible, e.g. 2023-02-29; keep the text
  }
  return std::string(text);
}

class Sheet {
 public:
  struct Cell {
    std::string source;
    formula::NodePtr formula;  // set for formula cells that parsed
    CellValue literal;         // literal cells; ErrorValue(Parse) for broken formulas

    bool is_formula() const noexcept { return !source.empty() && source.front() == '='; }
  };

  using CellMap = std::map<CellAddress, Cell>;

  // Stores `text` at `at`. Text starting with '=' is parsed as a formula; a
  // parse failure is kept on the cell as ErrorValue(Parse). Empty text clears
  // the cell. Invalidates any evaluated values.
  void set(CellAddress at, std::string text) {
    values_.clear();
    evaluated_ = false;
    if (text.empty()) {
      cells_.erase(at);
      return;
    }
    Cell cell;
    cell.source = std::move(text);
    if (cell.is_formula()) {
      try {
        cell.formula = formula::parse(cell.source);
      } catch (const SyntaxError& e) {
        cell.literal = ErrorValue{ErrorKind::Parse, e.what()};
      }
    } else {
      cell.literal = literal_value(cell.source);
    }
    columns_ = std::max(columns_, at.column);
    rows_ = std::max(rows_, at.row);
    cells_[at] = std::move(cell);
  }

  const Cell* find(CellAddress at) const {
    auto it = cells_.find(at);
    return it == cells_.end() ? nullptr : &it->second;
  }

  const CellMap& cells() const noexcept { return cells_; }
  int columns() const noexcept { return columns_; }
  int rows() const noexcept { return rows_; }
  bool in_bounds(CellAddress a) const noexcept { return a.column <= columns_ && a.row <= rows_; }

  bool evaluated() const noexcept { return evaluated_; }

  // Evaluated value of a non-blank cell; null for blanks. Requires
  // evaluate_sheet() to have run.
  const CellValue* value(CellAddress at) const {
    auto it = values_.find(at);
    return it == values_.end() ? nullptr : &it->second;
  }

  const std::map<CellAddress, CellValue>& values() const noexcept { return values_; }
  PrecisionMode evaluated_mode() const noexcept { return mode_; }

  // Written by the evaluator only.
  void store_values(std::map<CellAddress, CellValue> values, PrecisionMode mode) {
    values_ = std::move(values);
    mode_ = mode;
    evaluated_ = true;
  }

 private:
  CellMap cells_;
  std::map<CellAddress, CellValue> values_;
  int columns_ = 0;
  int rows_ = 0;
  bool evaluated_ = false;
  PrecisionMode mode_ = PrecisionMode::Compat;
};

inline constexpr std::size_t kMaxWorkbookCells = 1'000'000;

/// Builds a sheet from CSV text: row 1 is the first line, column A the
/// first field. Empty fields are blank cells.
inline Sheet parse_workbook(std::string_view csv_text) {
  const auto rows = parse_csv(csv_text, kMaxWorkbookCells);
  if (rows.size() > static_cast<std::size_t>(kMaxRow)) throw LoadError("too many rows");
  Sheet sheet;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() > static_cast<std::size_t>(kMaxColumn)) throw LoadError("too many columns in row " + std::to_string(r + 1));
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (rows[r][c].empty()) continue;
      sheet.set({static_cast<int>(c + 1), static_cast<int>(r + 1)}, rows[r][c]);
    }
  }
  return sheet;
}

inline Sheet load_workbook(const std::string& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw LoadError("cannot open workbook '" + path + "'");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open workbook '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw LoadError("cannot read workbook '" + path + "'");
  return parse_workbook(buf.str());
}

}  // namespace ledgerlint
