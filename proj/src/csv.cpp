#include "rvlab/csv.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rvlab {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

double parse_number(const std::string& cell, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) {
            throw std::invalid_argument(cell);
        }
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("csv line " + std::to_string(line_no) + ": not a number: '" + cell + "'");
    }
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw std::runtime_error("csv: missing column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        if (table.header.empty()) {
            table.header = split(line);
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != table.header.size()) {
            throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(table.header.size()) + " fields");
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            row.push_back(parse_number(c, line_no));
        }
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty()) {
        throw std::runtime_error("csv: missing header");
    }
    return table;
}

std::vector<double> read_csv_column(std::istream& in, const std::string& name) {
    const CsvTable table = read_csv(in);
    const std::size_t col = table.column(name);
    std::vector<double> out;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        out.push_back(row[col]);
    }
    return out;
}

void write_series_csv(std::ostream& out, const std::vector<double>& values, const std::string& header) {
    out << header << '\n';
    out.precision(std::numeric_limits<double>::max_digits10);
    for (double v : values) {
        out << v << '\n';
    }
}

}  // namespace rvlab
