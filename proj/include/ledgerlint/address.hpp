#pragma once

#include <cctype>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace ledgerlint {

inline constexpr int kMaxColumn = 16384;   // XFD
inline constexpr int kMaxRow = 1048576;

// A1-style cell address, 1-based. Ordered row-major (A1, B1, ..., A2).
struct CellAddress {
  int column = 1;
  int row = 1;

  friend constexpr bool operator==(const CellAddress&, const CellAddress&) = default;
  friend constexpr std::strong_ordering operator<=>(const CellAddress& a, const CellAddress& b) {
    if (auto c = a.row <=> b.row; c != 0) return c;
    return a.column <=> b.column;
  }

  std::string str() const {
    std::string letters;
    for (int c = column; c > 0; c = (c - 1) / 26) letters.insert(letters.begin(), static_cast<char>('A' + (c - 1) % 26));
    return letters + std::to_string(row);
  }
};

// Parses "B12" (case-insensitive, at most three letters). nullopt when the
// text is not exactly an in-bounds address.
inline std::optional<CellAddress> parse_address(std::string_view text) {
  std::size_t i = 0;
  int column = 0;
  while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) {
    column = column * 26 + (std::toupper(static_cast<unsigned char>(text[i])) - 'A' + 1);
    ++i;
  }
  if (i == 0 || i > 3 || i == text.size()) return std::nullopt;
  if (text[i] == '0') return std::nullopt;
  long row = 0;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
    row = row * 10 + (text[i] - '0');
    if (row > kMaxRow) return std::nullopt;
  }
  if (column > kMaxColumn) return std::nullopt;
  return CellAddress{column, static_cast<int>(row)};
}

struct CellRange {
  CellAddress first;
  CellAddress last;

  // Swaps corners so first is top-left and last bottom-right.
  static constexpr CellRange normalized(CellAddress a, CellAddress b) {
    return {{a.column < b.column ? a.column : b.column, a.row < b.row ? a.row : b.row},
            {a.column < b.column ? b.column : a.column, a.row < b.row ? b.row : a.row}};
  }

  constexpr bool contains(CellAddress c) const noexcept {
    return c.column >= first.column && c.column <= last.column && c.row >= first.row && c.row <= last.row;
  }

  constexpr long long area() const noexcept {
    return static_cast<long long>(last.column - first.column + 1) * (last.row - first.row + 1);
  }

  friend constexpr bool operator==(const CellRange&, const CellRange&) = default;

  std::string str() const { return first.str() + ":" + last.str(); }
};

}  // namespace ledgerlint
