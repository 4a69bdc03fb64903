#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sfdoa::csv {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

/// Strict parse: the whole field must be consumed. Returns false otherwise.
bool parse_double(std::string_view text, double& out);
bool parse_long(std::string_view text, long& out);

std::vector<std::string> split_fields(std::string_view line);
std::string join_fields(const std::vector<std::string>& fields);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};

/// Reads a comma-separated file with a header line. Blank lines are skipped.
/// Throws IoError when the file cannot be opened.
Table read_file(const std::string& path);

}  // namespace sfdoa::csv
