#include "bgpwave/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "bgpwave/errors.hpp"

namespace bgpwave {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw IoError("not a number: '" + s + "'");
    }
    return v;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    if (table.header.size() != table.columns.size()) {
        throw IoError("csv: header/column count mismatch for " + path.string());
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    for (size_t j = 0; j < table.header.size(); ++j) {
        if (j) out << ',';
        out << table.header[j];
    }
    out << '\n';
    const int rows = table.rows();
    for (const auto& col : table.columns) {
        if (static_cast<int>(col.size()) != rows) {
            throw IoError("csv: ragged columns for " + path.string());
        }
    }
    for (int i = 0; i < rows; ++i) {
        for (size_t j = 0; j < table.columns.size(); ++j) {
            if (j) out << ',';
            out << format_double(table.columns[j][static_cast<size_t>(i)]);
        }
        out << '\n';
    }
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty csv: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.header.push_back(cell);
    }
    table.columns.resize(table.header.size());
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        size_t j = 0;
        while (std::getline(ss, cell, ',')) {
            if (j >= table.columns.size()) {
                throw IoError("csv row wider than header: " + path.string());
            }
            table.columns[j].push_back(parse_double(cell));
            ++j;
        }
        if (j != table.columns.size()) {
            throw IoError("csv row narrower than header: " + path.string());
        }
    }
    return table;
}

void write_csv_rows(const std::filesystem::path& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    for (size_t j = 0; j < header.size(); ++j) {
        if (j) out << ',';
        out << header[j];
    }
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size()) {
            throw IoError("csv: row width mismatch for " + path.string());
        }
        for (size_t j = 0; j < row.size(); ++j) {
            if (j) out << ',';
            out << row[j];
        }
        out << '\n';
    }
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace bgpwave
