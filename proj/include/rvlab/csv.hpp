#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rvlab {

/// Numeric CSV table: one header row of column names, then numeric rows.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Index of a named column; throws if absent.
    std::size_t column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);

/// Reads a single numeric column by name (the `value` column for series).
std::vector<double> read_csv_column(std::istream& in, const std::string& name);

void write_series_csv(std::ostream& out, const std::vector<double>& values,
                      const std::string& header = "value");

}  // namespace rvlab
