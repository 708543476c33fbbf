#include "adaptps/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace adaptps {

void BasisSpec::validate() const {
    if (!(x_min < x_max))
        throw std::invalid_argument("BasisSpec: x_min must be < x_max");
    if (degree < 0) throw std::invalid_argument("BasisSpec: degree must be >= 0");
    if (d <= degree)
        throw std::invalid_argument("BasisSpec: basis dimension d (" + std::to_string(d) +
                                    ") must exceed degree (" + std::to_string(degree) + ")");
    if (q < 1 || d - q < 1)
        throw std::invalid_argument("BasisSpec: penalty order q must satisfy 1 <= q <= d - 1");
}

Vector make_knots(const BasisSpec& spec) {
    spec.validate();
    const int n_knots = spec.d + spec.degree + 1;
    const double h = (spec.x_max - spec.x_min) / static_cast<double>(spec.d - spec.degree);
    Vector knots(n_knots);
    for (int i = 0; i < n_knots; ++i)
        knots[i] = spec.x_min + (i - spec.degree) * h;
    return knots;
}

Matrix eval_basis(const Vector& x, const BasisSpec& spec) {
    spec.validate();
    const Vector knots = make_knots(spec);
    const int deg = spec.degree;
    const double h = (spec.x_max - spec.x_min) / static_cast<double>(spec.d - spec.degree);

    Matrix B = Matrix::Zero(x.size(), spec.d);
    std::vector<double> N(deg + 1), left(deg + 1), right(deg + 1);
    for (Index i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        if (!(xi >= spec.x_min && xi <= spec.x_max))
            throw std::invalid_argument("eval_basis: sample " + std::to_string(xi) +
                                        " outside the basis domain [" + std::to_string(spec.x_min) +
                                        ", " + std::to_string(spec.x_max) + "]");
        // Knot span index; the right boundary belongs to the last interval.
        int span = deg + static_cast<int>(std::floor((xi - spec.x_min) / h));
        span = std::min(std::max(span, deg), spec.d - 1);
        // Guard against floating-point placement on either side of a knot.
        while (span > deg && xi < knots[span]) --span;
        while (span < spec.d - 1 && xi >= knots[span + 1]) ++span;

        N[0] = 1.0;
        for (int r = 1; r <= deg; ++r) {
            left[r] = xi - knots[span + 1 - r];
            right[r] = knots[span + r] - xi;
            double saved = 0.0;
            for (int j = 0; j < r; ++j) {
                const double tmp = N[j] / (right[j + 1] + left[r - j]);
                N[j] = saved + right[j + 1] * tmp;
                saved = left[r - j] * tmp;
            }
            N[r] = saved;
        }
        for (int j = 0; j <= deg; ++j) B(i, span - deg + j) = N[j];
    }
    return B;
}

Matrix diff_matrix(int d, int q) {
    if (d < 2) throw std::invalid_argument("diff_matrix: d must be >= 2");
    if (q < 1 || q >= d)
        throw std::invalid_argument("diff_matrix: order q must satisfy 1 <= q < d");
    auto first_diff = [](int m) {
        Matrix D = Matrix::Zero(m - 1, m);
        for (int i = 0; i < m - 1; ++i) {
            D(i, i) = -1.0;
            D(i, i + 1) = 1.0;
        }
        return D;
    };
    Matrix D = first_diff(d);
    for (int k = 1; k < q; ++k) D = first_diff(d - k) * D;
    return D;
}

Matrix box_product(const Matrix& A, const Matrix& B) {
    if (A.rows() != B.rows())
        throw std::invalid_argument("box_product: operands must have equal row counts");
    Matrix out(A.rows(), A.cols() * B.cols());
    for (Index i = 0; i < A.rows(); ++i)
        for (Index ja = 0; ja < A.cols(); ++ja)
            out.row(i).segment(ja * B.cols(), B.cols()) = A(i, ja) * B.row(i);
    return out;
}

Matrix kron(const Matrix& A, const Matrix& B) {
    Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Index ia = 0; ia < A.rows(); ++ia)
        for (Index ja = 0; ja < A.cols(); ++ja)
            out.block(ia * B.rows(), ja * B.cols(), B.rows(), B.cols()) = A(ia, ja) * B;
    return out;
}

}  // namespace adaptps
