#ifndef ADAPTPS_IO_MATRIX_MARKET_HPP
#define ADAPTPS_IO_MATRIX_MARKET_HPP

#include "adaptps/types.hpp"

#include <string>

namespace adaptps {

/// Coordinate-format Matrix Market file (general real, 1-based indices).
/// Zero entries are omitted; values round-trip exactly.
void write_matrix_market(const std::string& path, const Matrix& m);

Matrix read_matrix_market(const std::string& path);

}  // namespace adaptps

#endif
