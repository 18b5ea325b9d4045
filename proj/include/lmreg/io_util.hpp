#pragma once

#include <string>
#include <vector>

namespace lmreg::io {

// Writes via a temp file in the same directory, then renames into place.
void atomic_write(const std::string& path, const std::string& content);

std::string trim(const std::string& s);
std::vector<std::string> split_csv_line(const std::string& line);

// Shortest round-trip decimal representation; pins byte-identical output.
std::string format_double(double v);

}  // namespace lmreg::io
