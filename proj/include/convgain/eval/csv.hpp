#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace convgain::eval {

/// Shortest "%.17g" text that reads back to the same double; NaN -> "nan".
std::string format_number(double value);

/// RFC 4180 quoting: wraps in double quotes when the field holds a comma,
/// quote or line break.
std::string csv_field(const std::string& text);

/// Splits one CSV record (no embedded line breaks) honouring quotes.
std::vector<std::string> split_csv_record(const std::string& line);

/// Writes `text` to `path`, creating parent directories; IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace convgain::eval
