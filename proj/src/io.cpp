#include "ncover/io.hpp"

#include "ncover/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ncover {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParameterError("CSV is missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

std::vector<double> CsvTable::values(const std::string& name) const {
    const std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[c]);
    return out;
}

CsvTable read_csv(const std::string& path, const std::vector<std::string>& required_columns) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open CSV '" + path + "'");
    CsvTable table;
    std::string line;
    while (std::getline(in, line)) {
        if (!trim(line).empty()) break;
    }
    if (trim(line).empty()) throw ParameterError("CSV '" + path + "' is empty");
    table.header = split(trim(line));
    for (const auto& col : required_columns) table.column(col);

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(trim(line));
        if (cells.size() != table.header.size()) {
            throw ParameterError("CSV '" + path + "' line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(table.header.size()) + " cells, got " +
                                 std::to_string(cells.size()));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(c, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (c.empty() || used != c.size()) {
                throw ParameterError("CSV '" + path + "' line " + std::to_string(line_no) +
                                     ": non-numeric cell '" + c + "'");
            }
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_csv_row(std::ostream& os, const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << ',';
        os << format_double(values[i]);
    }
    os << '\n';
}

}  // namespace ncover
