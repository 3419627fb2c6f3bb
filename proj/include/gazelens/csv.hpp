// Minimal delimiter-separated text helpers (RFC 4180 quoting).
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gazelens::csv {

/// Splits one record. Double-quoted fields may contain the delimiter;
/// a doubled quote inside a quoted field is a literal quote.
std::vector<std::string> split_row(std::string_view line, char delim = ',');

/// Quotes a field only when it contains the delimiter, a quote or a newline.
std::string escape(std::string_view field, char delim = ',');

std::string trim(std::string_view s);

}  // namespace gazelens::csv
