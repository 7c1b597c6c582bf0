#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace vesd {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

/// Parses a double written by format_double (also accepts "nan"/"inf").
double parse_double(std::string_view text);

/// Splits one CSV line on commas. Quoting is not supported; fields never
/// contain commas.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace vesd
