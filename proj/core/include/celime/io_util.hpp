#pragma once

#include <filesystem>
#include <string>

namespace celime {

// Shortest decimal form that round-trips to the same double; integers print
// without an exponent.  Keeps emitted files byte-stable across runs.
std::string format_double(double value);

// Write-then-rename so readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

}  // namespace celime
