#pragma once

#include <string>
#include <vector>

#include "vortexlab/errors.hpp"

namespace vortexlab::cli {

// Deterministic CSV: fixed "%.12g" formatting, one header line.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void write(const std::string& path) const;
    static CsvTable read(const std::string& path);

    std::size_t column(const std::string& name) const;
    std::vector<double> values(const std::string& name) const;
};

std::string format_double(double v);

} // namespace vortexlab::cli
