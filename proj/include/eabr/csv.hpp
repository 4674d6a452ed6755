#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace eabr::csv {

struct Row {
  std::size_t line = 0;  // 1-based line number in the source text
  std::vector<std::string> fields;
};

// Splits comma-separated text into rows. Blank lines and lines whose first
// non-space character is '#' are skipped. Fields are whitespace-trimmed;
// quoting is not supported. The first remaining row must match `header`
// exactly (after trimming), otherwise ParseError.
std::vector<Row> read(std::string_view text, const std::vector<std::string>& header);

std::int64_t parse_int(const Row& row, std::size_t column, std::string_view name);
double parse_double(const Row& row, std::size_t column, std::string_view name);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

}  // namespace eabr::csv
