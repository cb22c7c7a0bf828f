#include "slumber/csv.hpp"

#include <cstdint>
#include <iterator>
#include <istream>
#include <ostream>

#include "slumber/error.hpp"

namespace slumber::csv {

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw Error(ErrorKind::MissingColumn, std::string(name));
}

bool valid_utf8(std::string_view text) {
  std::size_t i = 0;
  const auto n = text.size();
  while (i < n) {
    auto c = static_cast<unsigned char>(text[i]);
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= n) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // overlong forms, surrogates, out of range
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) ||
        (extra == 3 && cp < 0x10000) || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF))
      return false;
    i += extra + 1;
  }
  return true;
}

Table parse(std::string_view text, char delimiter) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  Table table;
  std::vector<Row> records;
  Row current;
  std::string cell;
  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();
  bool in_record = false;

  auto finish_record = [&] {
    current.cells.push_back(std::move(cell));
    cell.clear();
    bool blank = current.cells.size() == 1 && current.cells[0].empty();
    if (!blank) {
      for (const auto& c : current.cells)
        if (!valid_utf8(c))
          throw Error(ErrorKind::MalformedRow,
                      "line " + std::to_string(current.line) + ": invalid UTF-8");
      records.push_back(std::move(current));
    }
    current = Row{};
    in_record = false;
  };

  while (i < n) {
    if (!in_record) {
      current.line = line;
      in_record = true;
    }
    char c = text[i];
    if (c == '"' && cell.empty()) {
      // quoted cell
      std::size_t start_line = line;
      ++i;
      bool closed = false;
      while (i < n) {
        char q = text[i];
        if (q == '"') {
          if (i + 1 < n && text[i + 1] == '"') {
            cell.push_back('"');
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        if (q == '\n') ++line;
        cell.push_back(q);
        ++i;
      }
      if (!closed)
        throw Error(ErrorKind::MalformedRow,
                    "line " + std::to_string(start_line) + ": unterminated quote");
      // after the closing quote only a delimiter or a line break may follow
      if (i < n && text[i] != delimiter && text[i] != '\n' && text[i] != '\r')
        throw Error(ErrorKind::MalformedRow,
                    "line " + std::to_string(line) + ": text after closing quote");
      continue;
    }
    if (c == delimiter) {
      current.cells.push_back(std::move(cell));
      cell.clear();
      ++i;
      continue;
    }
    if (c == '\r' && i + 1 < n && text[i + 1] == '\n') {
      ++i;
      continue;
    }
    if (c == '\n') {
      finish_record();
      ++line;
      ++i;
      continue;
    }
    cell.push_back(c);
    ++i;
  }
  if (in_record) finish_record();

  if (records.empty()) throw Error(ErrorKind::MissingColumn, "header row");
  table.header = std::move(records.front().cells);
  table.rows.assign(std::make_move_iterator(records.begin() + 1),
                    std::make_move_iterator(records.end()));
  return table;
}

Table read(std::istream& in, char delimiter) {
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse(text, delimiter);
}

std::string escape(std::string_view cell, char delimiter) {
  bool needs_quotes = cell.find_first_of(std::string{delimiter, '"', '\n', '\r'}) !=
                      std::string_view::npos;
  if (!needs_quotes) return std::string(cell);
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, std::span<const std::string> cells,
               char delimiter) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << delimiter;
    out << escape(cells[i], delimiter);
  }
  out << '\n';
}

std::vector<std::string> split_packed(std::string_view cell, char sep) {
  std::vector<std::string> out;
  if (cell.empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto pos = cell.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(cell.substr(start));
      break;
    }
    out.emplace_back(cell.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string join_packed(std::span<const std::string> items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out.push_back(sep);
    out += items[i];
  }
  return out;
}

}  // namespace slumber::csv
