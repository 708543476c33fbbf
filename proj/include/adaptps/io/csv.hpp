#ifndef ADAPTPS_IO_CSV_HPP
#define ADAPTPS_IO_CSV_HPP

#include "adaptps/types.hpp"

#include <string>
#include <vector>

namespace adaptps {

/// Header-row CSV with comma separators and '.' decimals.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<Vector> data;  ///< one numeric column per header entry

    Index n_rows() const { return data.empty() ? 0 : data.front().size(); }
    bool has_column(const std::string& name) const;
    const Vector& column(const std::string& name) const;
};

/// Reads the whole file; missing values and non-numeric cells are errors.
CsvTable read_csv(const std::string& path);

void write_csv(const std::string& path, const CsvTable& table);

}  // namespace adaptps

#endif
