#include "adaptps/glam.hpp"

#include "adaptps/basis.hpp"

#include <numeric>
#include <stdexcept>

namespace adaptps {

GridArray::GridArray(std::vector<Index> extents, Vector data)
    : dims(std::move(extents)), values(std::move(data)) {
    Index total = 1;
    for (Index e : dims) total *= e;
    if (total != values.size())
        throw std::invalid_argument("GridArray: extents do not match data size");
}

GridArray GridArray::zeros(std::vector<Index> extents) {
    Index total = 1;
    for (Index e : extents) total *= e;
    return GridArray(std::move(extents), Vector::Zero(total));
}

GridArray GridArray::from_vec(const Vector& v, std::vector<Index> extents) {
    return GridArray(std::move(extents), v);
}

GridArray rh_transform(const Matrix& M, const GridArray& A) {
    if (A.order() < 1) throw std::invalid_argument("rh_transform: array has no axes");
    const Index e0 = A.dims[0];
    if (M.cols() != e0)
        throw std::invalid_argument("rh_transform: matrix columns do not match first extent");
    const Index rest = A.size() / e0;
    Eigen::Map<const Matrix> unfolded(A.values.data(), e0, rest);
    Matrix R = M * unfolded;  // m x rest

    std::vector<Index> out_dims(A.dims.begin() + 1, A.dims.end());
    out_dims.push_back(M.rows());
    GridArray out;
    out.dims = std::move(out_dims);
    out.values = R.transpose().reshaped();
    return out;
}

GridArray glam_fitted(const std::vector<Matrix>& B_margins, const GridArray& theta) {
    if (static_cast<Index>(B_margins.size()) != theta.order())
        throw std::invalid_argument("glam_fitted: one marginal matrix per axis required");
    GridArray out = theta;
    for (const Matrix& B : B_margins) out = rh_transform(B, out);
    return out;
}

Matrix glam_weighted_inner(const std::vector<Matrix>& B_margins, const GridArray& W) {
    const int K = static_cast<int>(B_margins.size());
    if (K != W.order())
        throw std::invalid_argument("glam_weighted_inner: one marginal matrix per axis required");
    for (int m = 0; m < K; ++m)
        if (B_margins[m].rows() != W.dims[m])
            throw std::invalid_argument("glam_weighted_inner: weight extents do not match the grid");

    // Contract each grid axis with the row-wise square G(B_m) = B_m box B_m.
    GridArray R = W;
    std::vector<Index> d(K);
    for (int m = 0; m < K; ++m) {
        d[m] = B_margins[m].cols();
        R = rh_transform(box_product(B_margins[m], B_margins[m]).transpose(), R);
    }

    Index c = 1;
    for (int m = 0; m < K; ++m) c *= d[m];
    Matrix out(c, c);
    // R has extents (d_1^2, ..., d_K^2); entry index c_m = j_m * d_m + j'_m.
    std::vector<Index> strides(K);
    strides[0] = 1;
    for (int m = 1; m < K; ++m) strides[m] = strides[m - 1] * d[m - 1];
    std::vector<Index> idx(K, 0);
    for (Index lin = 0; lin < R.size(); ++lin) {
        Index row = 0, col = 0;
        for (int m = 0; m < K; ++m) {
            row += (idx[m] / d[m]) * strides[m];
            col += (idx[m] % d[m]) * strides[m];
        }
        out(row, col) = R.values[lin];
        for (int m = 0; m < K; ++m) {
            if (++idx[m] < R.dims[m]) break;
            idx[m] = 0;
        }
    }
    return out;
}

Vector glam_weighted_rhs(const std::vector<Matrix>& B_margins, const GridArray& V) {
    if (static_cast<Index>(B_margins.size()) != V.order())
        throw std::invalid_argument("glam_weighted_rhs: one marginal matrix per axis required");
    GridArray out = V;
    for (const Matrix& B : B_margins) out = rh_transform(B.transpose(), out);
    return out.values;
}

}  // namespace adaptps
