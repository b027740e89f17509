#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace lab {

// Column-major data behind every artifact; the first column is the abscissa.
struct Table {
    std::vector<std::string> header; // "name (unit)"
    std::vector<std::vector<double>> rows;
};

// Comma separated, LF endings, 17 significant digits, "nan" for missing values.
std::string format_csv(const Table& t);

// Line plot of every column against the first; NaN breaks a line.
std::string format_svg(const Table& t, const std::string& title);

// Write to a sibling temporary file, then rename over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string sha256_hex(const std::string& data);

} // namespace lab
