#include "adaptps/io/matrix_market.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace adaptps {

void write_matrix_market(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("matrix market: cannot write '" + path + "'");
    Index nnz = 0;
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
            if (m(i, j) != 0.0) ++nnz;
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows() << " " << m.cols() << " " << nnz << "\n";
    out << std::setprecision(17);
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
            if (m(i, j) != 0.0) out << i + 1 << " " << j + 1 << " " << m(i, j) << "\n";
    if (!out) throw std::runtime_error("matrix market: write to '" + path + "' failed");
}

Matrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("matrix market: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
        throw std::invalid_argument("matrix market: '" + path + "' has no banner");
    if (line.find("coordinate") == std::string::npos ||
        line.find("general") == std::string::npos)
        throw std::invalid_argument("matrix market: only coordinate/general supported");
    do {
        if (!std::getline(in, line))
            throw std::invalid_argument("matrix market: missing size line");
    } while (!line.empty() && line[0] == '%');

    Index rows = 0, cols = 0, nnz = 0;
    {
        std::istringstream ss(line);
        if (!(ss >> rows >> cols >> nnz))
            throw std::invalid_argument("matrix market: malformed size line");
    }
    Matrix m = Matrix::Zero(rows, cols);
    for (Index k = 0; k < nnz; ++k) {
        Index i = 0, j = 0;
        double v = 0.0;
        if (!(in >> i >> j >> v))
            throw std::invalid_argument("matrix market: truncated entry list");
        if (i < 1 || i > rows || j < 1 || j > cols)
            throw std::invalid_argument("matrix market: index out of bounds");
        m(i - 1, j - 1) = v;
    }
    return m;
}

}  // namespace adaptps
