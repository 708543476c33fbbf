#ifndef ADAPTPS_BASIS_HPP
#define ADAPTPS_BASIS_HPP

#include "adaptps/types.hpp"

namespace adaptps {

/// Marginal B-spline basis with a difference penalty of order q.
struct BasisSpec {
    double x_min = 0.0;
    double x_max = 1.0;
    int d = 12;      ///< basis dimension (number of B-splines)
    int degree = 3;  ///< polynomial degree of the splines
    int q = 2;       ///< penalty order

    /// Throws std::invalid_argument unless d > degree, d - q >= 1 and
    /// x_min < x_max.
    void validate() const;
};

/// Equally spaced knot sequence of length d + degree + 1 covering
/// [x_min, x_max] with `degree` knots extending h beyond each boundary,
/// h = (x_max - x_min) / (d - degree).
Vector make_knots(const BasisSpec& spec);

/// n x d design matrix of B-spline values via the Cox-de Boor recurrence.
/// Rows sum to 1 (partition of unity); at most degree+1 nonzeros per row.
/// Out-of-domain samples are rejected. No extrapolation.
Matrix eval_basis(const Vector& x, const BasisSpec& spec);

/// Forward difference matrix of order q, (d-q) x d, with D1 having rows
/// (-1, 1, 0, ...). D_q composes D1 q times.
Matrix diff_matrix(int d, int q);

/// Row-wise Kronecker (box / face-splitting) product: row i of the result is
/// kron(row i of A, row i of B). Column (ja, jb) -> ja * cols(B) + jb, so the
/// B index varies fastest, matching vec() with the first dimension fastest.
Matrix box_product(const Matrix& A, const Matrix& B);

/// Standard Kronecker product.
Matrix kron(const Matrix& A, const Matrix& B);

}  // namespace adaptps

#endif
