#include "adaptps/io/csv.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace adaptps {

bool CsvTable::has_column(const std::string& name) const {
    return std::find(columns.begin(), columns.end(), name) != columns.end();
}

const Vector& CsvTable::column(const std::string& name) const {
    for (size_t j = 0; j < columns.size(); ++j)
        if (columns[j] == name) return data[j];
    throw std::invalid_argument("csv: no column named '" + name + "'");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

std::string trimmed(std::string s) {
    const auto issp = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && issp(s.front())) s.erase(s.begin());
    while (!s.empty() && issp(s.back())) s.pop_back();
    return s;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("csv: cannot open '" + path + "'");

    CsvTable table;
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("csv: '" + path + "' is empty");
    for (std::string& h : split_line(line)) {
        h = trimmed(h);
        if (h.empty()) throw std::invalid_argument("csv: empty column name in header");
        table.columns.push_back(h);
    }

    std::vector<std::vector<double>> cols(table.columns.size());
    Index row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trimmed(line).empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != table.columns.size())
            throw std::invalid_argument("csv: row " + std::to_string(row) + " has " +
                                        std::to_string(fields.size()) + " fields, expected " +
                                        std::to_string(table.columns.size()));
        for (size_t j = 0; j < fields.size(); ++j) {
            const std::string f = trimmed(fields[j]);
            if (f.empty())
                throw std::invalid_argument("csv: missing value at row " + std::to_string(row) +
                                            ", column '" + table.columns[j] + "'");
            char* end = nullptr;
            const double v = std::strtod(f.c_str(), &end);
            if (end == f.c_str() || *end != '\0')
                throw std::invalid_argument("csv: malformed number '" + f + "' at row " +
                                            std::to_string(row) + ", column '" +
                                            table.columns[j] + "'");
            cols[j].push_back(v);
        }
    }
    for (const auto& c : cols)
        table.data.push_back(Eigen::Map<const Vector>(c.data(), static_cast<Index>(c.size())));
    return table;
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("csv: cannot write '" + path + "'");
    out << std::setprecision(17);
    for (size_t j = 0; j < table.columns.size(); ++j)
        out << (j ? "," : "") << table.columns[j];
    out << "\n";
    for (Index i = 0; i < table.n_rows(); ++i) {
        for (size_t j = 0; j < table.data.size(); ++j)
            out << (j ? "," : "") << table.data[j][i];
        out << "\n";
    }
    if (!out) throw std::runtime_error("csv: write to '" + path + "' failed");
}

}  // namespace adaptps
