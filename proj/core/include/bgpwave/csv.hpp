#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace bgpwave {

/// Column-oriented numeric table. Values print in shortest round-trip
/// decimal form, so emit followed by read returns bit-identical doubles.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;  ///< one vector per header entry

    int rows() const noexcept {
        return columns.empty() ? 0 : static_cast<int>(columns.front().size());
    }
};

/// Formats one double in shortest round-trip decimal.
std::string format_double(double v);

/// Parses a double previously written by format_double; throws IoError on junk.
double parse_double(const std::string& s);

/// Writes UTF-8 CSV, header first. Throws IoError with the path on failure.
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Reads a CSV written by write_csv (numeric body, no quoting).
CsvTable read_csv(const std::filesystem::path& path);

/// Rows of non-numeric cells alongside numeric ones are not supported by
/// CsvTable; sweeps with a status column use this mixed writer instead:
/// each row is a list of preformatted cells.
void write_csv_rows(const std::filesystem::path& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows);

}  // namespace bgpwave
