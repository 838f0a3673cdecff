#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace emdsel {

// 17-significant-digit, locale-free number formatting ('.' decimal point).
// Round-trips any finite double exactly, so rewriting a parsed artifact
// reproduces it byte for byte.
std::string format_double17(double v);

// Minimal comma-separated parsing; no quoting, trailing newline tolerated.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

// Loads one loss per line from the given column (0-based).  A first row that
// does not parse as a number in that column is treated as a header.  Errors
// name the file and 1-based row.
std::vector<double> load_losses_csv(const std::string& path, std::size_t column = 0);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace emdsel
