#pragma once

#include <string>
#include <vector>

namespace pairing {

// Shortest round-trip decimal formatting; keeps CSV/JSON output stable
// byte-for-byte across runs.
std::string format_double(double v);

double parse_double(const std::string& text); // DataError on failure

std::vector<std::string> split_text(const std::string& text, char delim);

// Write-temp-then-rename so concurrent runs never observe partial files.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path); // DataError if unreadable

} // namespace pairing
