#include "adaptps/design.hpp"

#include "adaptps/glam.hpp"

#include <Eigen/QR>

#include <stdexcept>
#include <string>

namespace adaptps {

DenseDesign::DenseDesign(Matrix X, Matrix Z) : X_(std::move(X)), Z_(std::move(Z)) {
    if (X_.rows() != Z_.rows())
        throw std::invalid_argument("DenseDesign: X and Z must have equal row counts");
}

void DenseDesign::gram(const Vector& w, const Vector& z, Matrix& A, Vector& r) const {
    const Index p = X_.cols(), m = Z_.cols();
    Matrix U(X_.rows(), p + m);
    U.leftCols(p) = X_;
    U.rightCols(m) = Z_;
    Matrix WU = w.asDiagonal() * U;
    A.noalias() = U.transpose() * WU;
    r.noalias() = WU.transpose() * z;
}

Vector DenseDesign::linear_predictor(const Vector& beta, const Vector& alpha) const {
    return X_ * beta + Z_ * alpha;
}

void DenseDesign::check_fixed_rank() const {
    Eigen::ColPivHouseholderQR<Matrix> qr(X_);
    qr.setThreshold(1e-10);
    if (qr.rank() < X_.cols())
        throw std::runtime_error(
            "fixed-effects design is rank deficient (rank " + std::to_string(qr.rank()) +
            " of " + std::to_string(X_.cols()) +
            "); a covariate may be constant or the penalty order too large for the data");
}

GridDesign::GridDesign(std::vector<Matrix> B_margins, const Transforms& tf)
    : B_margins_(std::move(B_margins)), tf_(tf) {
    if (B_margins_.size() != tf_.marginals.size())
        throw std::invalid_argument("GridDesign: marginal count mismatch");
    n_ = 1;
    for (const Matrix& B : B_margins_) {
        extents_.push_back(B.rows());
        n_ *= B.rows();
    }
    T_.resize(tf_.T_zero.rows(), tf_.n_fixed() + tf_.n_random());
    T_.leftCols(tf_.n_fixed()) = tf_.T_zero;
    T_.rightCols(tf_.n_random()) = tf_.T_plus;
}

void GridDesign::gram(const Vector& w, const Vector& z, Matrix& A, Vector& r) const {
    const GridArray W = GridArray::from_vec(w, extents_);
    const GridArray WZ = GridArray::from_vec(w.cwiseProduct(z), extents_);
    const Matrix C_theta = glam_weighted_inner(B_margins_, W);
    const Vector r_theta = glam_weighted_rhs(B_margins_, WZ);
    A.noalias() = T_.transpose() * C_theta * T_;
    r.noalias() = T_.transpose() * r_theta;
}

Vector GridDesign::linear_predictor(const Vector& beta, const Vector& alpha) const {
    const Vector theta = tf_.T_zero * beta + tf_.T_plus * alpha;
    std::vector<Index> coef_dims;
    for (const MarginalEVD& m : tf_.marginals) coef_dims.push_back(m.U_zero.rows());
    return glam_fitted(B_margins_, GridArray::from_vec(theta, coef_dims)).values;
}

void GridDesign::check_fixed_rank() const {
    for (size_t w = 0; w < B_margins_.size(); ++w) {
        const Matrix Xw = B_margins_[w] * tf_.marginals[w].U_zero;
        Eigen::ColPivHouseholderQR<Matrix> qr(Xw);
        qr.setThreshold(1e-10);
        if (qr.rank() < Xw.cols())
            throw std::runtime_error("fixed-effects design is rank deficient along dimension " +
                                     std::to_string(w + 1));
    }
}

}  // namespace adaptps
