#include "eabr/csv.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "eabr/error.hpp"

namespace eabr::csv {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<Row> read(std::string_view text, const std::vector<std::string>& header) {
  // Strip a UTF-8 byte order mark.
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<Row> rows;
  bool header_seen = false;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    const auto line = text.substr(start, end == std::string_view::npos ? text.npos : end - start);
    ++line_no;
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;

    const auto trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;

    auto fields = split(trimmed, ',');
    if (!header_seen) {
      if (fields != header) {
        std::string expected;
        for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
        throw ParseError(line_no, fmt::format("expected header '{}', got '{}'", expected, trimmed));
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != header.size()) {
      throw ParseError(line_no, fmt::format("expected {} fields, got {}", header.size(), fields.size()));
    }
    rows.push_back(Row{line_no, std::move(fields)});
  }
  if (!header_seen) throw ParseError(0, "missing header line");
  return rows;
}

std::int64_t parse_int(const Row& row, std::size_t column, std::string_view name) {
  const auto& s = row.fields.at(column);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(row.line, fmt::format("{}: '{}' is not an integer", name, s));
  }
  return value;
}

double parse_double(const Row& row, std::size_t column, std::string_view name) {
  const auto& s = row.fields.at(column);
  double value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    throw ParseError(row.line, fmt::format("{}: '{}' is not a number", name, s));
  }
  return value;
}

}  // namespace eabr::csv
