#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace defectbench::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Splits one line on commas. Double-quoted fields may contain commas; "" is
/// an escaped quote. Surrounding whitespace is trimmed from unquoted fields.
std::vector<std::string> split_line(std::string_view line);

/// Reads a whole file. Blank lines are skipped; every row must have exactly as
/// many fields as the header.
Table read(const std::filesystem::path& path);

/// Parses a real number, rejecting trailing garbage. Returns false on failure.
bool parse_double(std::string_view text, double& out);

/// Shortest text that round-trips through parse_double at 17 significant digits.
std::string format_double(double v);

/// Quotes a field when it contains a comma, quote or newline.
std::string escape(std::string_view field);

}  // namespace defectbench::csv
