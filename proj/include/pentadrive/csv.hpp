#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pentadrive {

/// Shortest round-trip decimal form; "nan" for missing values.
std::string fmt_double(double v);

/// Splits one CSV line on commas (no quoting; none of our fields need it).
std::vector<std::string> split_csv_line(std::string_view line);

/// Parses a field written by fmt_double.
double parse_double(std::string_view field);

}  // namespace pentadrive
