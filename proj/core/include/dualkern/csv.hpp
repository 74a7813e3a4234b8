#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dualkern {

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

/// Parses a full token as a double; throws InvalidArgument on trailing junk.
double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

/// Splits one CSV line on commas, trimming surrounding whitespace.
std::vector<std::string> split_csv_line(std::string_view line);

/// Reads a numeric CSV, skipping blank lines and lines starting with '#'.
/// A first row that fails to parse as numbers is treated as a header.
std::vector<std::vector<double>> read_numeric_csv(const std::string& path);

std::string_view trim(std::string_view text);

}  // namespace dualkern
