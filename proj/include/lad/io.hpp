#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace lad {

// Reads an entire file; throws DataError if unreadable.
std::string read_file(const std::filesystem::path& path);

// Writes atomically: content goes to a temp file in the target directory,
// which is then renamed over the destination. A failed write never leaves
// a partial file behind.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// RFC 4180-style escaping: quotes a field when it contains a comma, quote,
// or newline.
std::string csv_escape(const std::string& field);

// Formats a double with enough digits to round-trip exactly.
std::string format_double(double value);

}  // namespace lad
