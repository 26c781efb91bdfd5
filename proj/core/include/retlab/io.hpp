#pragma once

#include <string>

namespace retlab {

// Shortest decimal form that parses back to the same double. Locale-free.
std::string format_double(double value);

// Strict full-string parse; returns false on trailing garbage or overflow.
bool parse_double(const std::string& text, double& out);

// Writes via a sibling temp file and renames over the target.
void atomic_write_file(const std::string& path, const std::string& contents);

std::string read_file(const std::string& path);

}  // namespace retlab
