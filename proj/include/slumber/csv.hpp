#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace slumber::csv {

struct Row {
  std::size_t line = 0;  // 1-based physical line where the record starts
  std::vector<std::string> cells;
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;

  /// Index of a header column. Throws Error(MissingColumn).
  std::size_t column(std::string_view name) const;
};

/// Reads an RFC 4180 style table. Quoted cells may contain the delimiter,
/// doubled quotes and line breaks. LF and CRLF are both accepted, a leading
/// UTF-8 byte order mark is skipped, and blank lines are ignored.
/// Throws Error(MalformedRow) on invalid UTF-8 or unterminated quotes and
/// Error(MissingColumn) when the header row is absent.
Table read(std::istream& in, char delimiter = ',');
Table parse(std::string_view text, char delimiter = ',');

bool valid_utf8(std::string_view text);

std::string escape(std::string_view cell, char delimiter = ',');
void write_row(std::ostream& out, std::span<const std::string> cells,
               char delimiter = ',');

/// Splits a ";"-packed list cell. Empty input yields an empty list; empty
/// items are preserved so callers can reject them.
std::vector<std::string> split_packed(std::string_view cell, char sep = ';');
std::string join_packed(std::span<const std::string> items, char sep = ';');

}  // namespace slumber::csv
