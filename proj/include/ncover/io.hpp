#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

namespace ncover {

/// Numeric CSV table with a header row.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Column index by name; ParameterError naming the column if absent.
    std::size_t column(const std::string& name) const;
    std::vector<double> values(const std::string& name) const;
};

/// Reads a numeric CSV. Missing required columns, ragged rows or
/// non-numeric cells raise ParameterError.
CsvTable read_csv(const std::string& path, const std::vector<std::string>& required_columns);

/// Shortest round-trip decimal representation ("%.17g").
std::string format_double(double value);

/// Writes one CSV row of numbers.
void write_csv_row(std::ostream& os, const std::vector<double>& values);

}  // namespace ncover
