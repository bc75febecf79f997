#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace homophily::csv {

/// Splits one RFC-4180 record. Quoted fields may contain the separator and
/// doubled quotes; embedded newlines are not supported.
std::vector<std::string> split(std::string_view line, char sep = ',');

std::string_view trim(std::string_view s);

/// Quotes a field when it contains the separator, a quote, or a line break.
std::string escape(std::string_view field, char sep = ',');

/// Writes fields joined by `sep` and terminated with CRLF-free "\n".
void write_row(std::ostream& out, const std::vector<std::string>& fields, char sep = ',');

/// Shortest round-trip decimal representation of a double ("nan" for NaN).
std::string format_double(double value);

}  // namespace homophily::csv
