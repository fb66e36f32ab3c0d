#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace adpi::csv {

/// Splits one CSV record. Double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split(std::string_view line);

/// Quotes a field when it contains a comma, quote or newline.
std::string escape(std::string_view field);

std::string_view trim(std::string_view s);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace adpi::csv
