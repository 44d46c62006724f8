#include "vortexlab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace vortexlab::cli {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void CsvTable::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out)
        throw RunError("csv: cannot open '" + path + "' for writing");
    for (std::size_t c = 0; c < columns.size(); ++c)
        out << (c ? "," : "") << columns[c];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << format_double(row[c]);
        out << "\n";
    }
}

CsvTable CsvTable::read(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw MissingArtifacts("csv: cannot open '" + path + "'");
    CsvTable t;
    std::string line;
    if (!std::getline(in, line))
        throw MissingArtifacts("csv: empty file '" + path + "'");
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ','))
        t.columns.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::stringstream rs(line);
        std::vector<double> row;
        while (std::getline(rs, cell, ','))
            row.push_back(std::stod(cell));
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t c = 0; c < columns.size(); ++c)
        if (columns[c] == name)
            return c;
    throw MissingArtifacts("csv: no column '" + name + "'");
}

std::vector<double> CsvTable::values(const std::string& name) const {
    const std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows)
        out.push_back(r.at(c));
    return out;
}

} // namespace vortexlab::cli
