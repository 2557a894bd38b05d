#pragma once

#include <cstddef>
#include <istream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include "ledgerlint/error.hpp"

namespace ledgerlint {

using CsvRow = std::vector<std::string>;

// RFC 4180 reader: quoted fields, doubled quotes, CRLF or LF line ends,
// line breaks inside quotes. A leading UTF-8 BOM is dropped. Throws
// LoadError for an unterminated quote or when more than `max_cells` fields
// are read.
inline std::vector<CsvRow> parse_csv(std::string_view text, std::size_t max_cells = 1'000'000) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  std::size_t cells = 0;
  bool quoted = false;
  bool row_started = false;

  auto end_field = [&] {
    if (++cells > max_cells) throw LoadError("workbook exceeds " + std::to_string(max_cells) + " cells");
    row.push_back(std::move(field));
    field.clear();
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
    row_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        row_started = true;
        break;
      case ',':
        end_field();
        row_started = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_row();
        break;
      case '\n':
        end_row();
        break;
      default:
        field += c;
        row_started = true;
    }
  }
  if (quoted) throw LoadError("unterminated quoted field");
  if (row_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

inline std::vector<CsvRow> read_csv(std::istream& in, std::size_t max_cells = 1'000'000) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw LoadError("read failure");
  return parse_csv(text, max_cells);
}

inline std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace ledgerlint
