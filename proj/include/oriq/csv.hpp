#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace oriq {

/// Minimal RFC-4180-style table: first non-comment line is the header,
/// double-quoted fields may contain commas and doubled quotes, lines
/// starting with '#' and blank lines are skipped.
struct CsvTable {
    std::string source;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a required column; FormatError when missing.
    std::size_t column(std::string_view name) const;
};

CsvTable parse_csv(std::istream& in, std::string source = "<stream>");
CsvTable read_csv(const std::filesystem::path& path);

std::vector<std::string> split_csv_line(std::string_view line);

/// Strict full-field double parse; FormatError naming `what` on failure.
double parse_double(std::string_view text, std::string_view what);

/// Quotes a field when it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

}  // namespace oriq
