#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace gennv {

// Single `demand` column with header; nonnegative decimals. Throws InputError with
// the offending 1-based line number.
std::vector<double> read_demand_csv(std::istream& in);
std::vector<double> read_demand_csv(const std::filesystem::path& path);

// 9 significant digits, '.' decimal point regardless of locale.
std::string format_number(double v);

// Rounds v to the value printed by format_number.
double round_sig9(double v);

// Splits one CSV line on commas (no quoting; none of our formats need it).
std::vector<std::string> split_csv_line(const std::string& line);

// Writes `contents` to a temporary sibling then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace gennv
