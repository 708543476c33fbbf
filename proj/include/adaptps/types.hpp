#ifndef ADAPTPS_TYPES_HPP
#define ADAPTPS_TYPES_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace adaptps {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Dense K-dimensional array (K <= 3) stored column-major: the first axis
/// varies fastest, matching vec() of a coefficient array with x1 fastest.
struct GridArray {
    std::vector<Index> dims;
    Vector values;

    GridArray() = default;
    GridArray(std::vector<Index> extents, Vector data);
    static GridArray zeros(std::vector<Index> extents);
    static GridArray from_vec(const Vector& v, std::vector<Index> extents);

    Index order() const { return static_cast<Index>(dims.size()); }
    Index size() const { return values.size(); }

    double& at(Index i0) { return values[i0]; }
    double& at(Index i0, Index i1) { return values[i0 + dims[0] * i1]; }
    double& at(Index i0, Index i1, Index i2) {
        return values[i0 + dims[0] * (i1 + dims[1] * i2)];
    }
    double at(Index i0) const { return values[i0]; }
    double at(Index i0, Index i1) const { return values[i0 + dims[0] * i1]; }
    double at(Index i0, Index i1, Index i2) const {
        return values[i0 + dims[0] * (i1 + dims[1] * i2)];
    }
};

}  // namespace adaptps

#endif
