#include "adaptps/precision.hpp"

#include <stdexcept>

namespace adaptps {

PrecisionModel PrecisionModel::from_dense(std::vector<Matrix> components,
                                          std::vector<ComponentTag> tags) {
    if (components.empty()) throw std::invalid_argument("PrecisionModel: no components");
    if (tags.size() != components.size())
        throw std::invalid_argument("PrecisionModel: one tag per component required");
    PrecisionModel pm;
    pm.factored_ = false;
    pm.n_random_ = components.front().rows();
    for (const Matrix& c : components)
        if (c.rows() != pm.n_random_ || c.cols() != pm.n_random_)
            throw std::invalid_argument("PrecisionModel: component size mismatch");
    pm.dense_ = std::move(components);
    pm.tags_ = std::move(tags);
    return pm;
}

PrecisionModel PrecisionModel::from_factors(std::vector<Matrix> W, std::vector<Matrix> psi) {
    if (W.empty() || W.size() != psi.size())
        throw std::invalid_argument("PrecisionModel: factor lists must match");
    PrecisionModel pm;
    pm.factored_ = true;
    pm.n_random_ = W.front().cols();
    for (size_t m = 0; m < W.size(); ++m) {
        if (W[m].cols() != pm.n_random_)
            throw std::invalid_argument("PrecisionModel: W column mismatch");
        if (psi[m].rows() != W[m].rows())
            throw std::invalid_argument("PrecisionModel: psi rows must match W rows");
        for (Index j = 0; j < psi[m].cols(); ++j) {
            pm.tags_.push_back({static_cast<int>(m), static_cast<int>(j)});
            pm.flat_.emplace_back(static_cast<int>(m), j);
        }
    }
    pm.W_ = std::move(W);
    pm.psi_ = std::move(psi);
    return pm;
}

Matrix PrecisionModel::assemble_precision(const Vector& sigma2_inv) const {
    if (sigma2_inv.size() != n_components())
        throw std::invalid_argument("assemble_precision: one precision per component required");
    Matrix G_inv = Matrix::Zero(n_random_, n_random_);
    if (!factored_) {
        for (Index l = 0; l < n_components(); ++l) G_inv += sigma2_inv[l] * dense_[l];
        return G_inv;
    }
    Index at = 0;
    for (size_t m = 0; m < W_.size(); ++m) {
        const Index P = psi_[m].cols();
        // Combined row weights: psi_m * sigma2_inv slice.
        Vector wrow = psi_[m] * sigma2_inv.segment(at, P);
        G_inv.noalias() += W_[m].transpose() * wrow.asDiagonal() * W_[m];
        at += P;
    }
    return G_inv;
}

Vector PrecisionModel::quad_forms(const Vector& alpha) const {
    Vector out(n_components());
    if (!factored_) {
        for (Index l = 0; l < n_components(); ++l)
            out[l] = alpha.dot(dense_[l] * alpha);
        return out;
    }
    Index at = 0;
    for (size_t m = 0; m < W_.size(); ++m) {
        const Vector v = (W_[m] * alpha).array().square();
        const Index P = psi_[m].cols();
        out.segment(at, P) = psi_[m].transpose() * v;
        at += P;
    }
    return out;
}

Vector PrecisionModel::trace_products(const Matrix& M) const {
    Vector out(n_components());
    if (!factored_) {
        for (Index l = 0; l < n_components(); ++l)
            out[l] = dense_[l].cwiseProduct(M).sum();
        return out;
    }
    Index at = 0;
    for (size_t m = 0; m < W_.size(); ++m) {
        // diag(W M W^T) without the full product.
        const Matrix WM = W_[m] * M;
        const Vector h = WM.cwiseProduct(W_[m]).rowwise().sum();
        const Index P = psi_[m].cols();
        out.segment(at, P) = psi_[m].transpose() * h;
        at += P;
    }
    return out;
}

Matrix PrecisionModel::dense_component(Index l) const {
    if (l < 0 || l >= n_components())
        throw std::invalid_argument("dense_component: index out of range");
    if (!factored_) return dense_[l];
    const auto [m, j] = flat_[l];
    return W_[m].transpose() * psi_[m].col(j).asDiagonal() * W_[m];
}

PrecisionModel build_precision_factors(const AdaptivePenaltySpec& spec, const Transforms& tf) {
    spec.validate();
    const int K = spec.n_dims();
    if (K != static_cast<int>(tf.marginals.size()))
        throw std::invalid_argument("build_precision_factors: dimension mismatch");

    std::vector<Matrix> W(K), psi(K);
    for (int m = 0; m < K; ++m) {
        const Matrix D = diff_matrix(spec.dims[m].d, spec.dims[m].q);
        Index rows = 1;
        for (int w = 0; w < K; ++w)
            rows *= (w == m) ? spec.dims[w].d - spec.dims[w].q : spec.dims[w].d;
        W[m] = Matrix::Zero(rows, tf.n_random());
        for (const TransformBlock& blk : tf.blocks) {
            if (!blk.mask[m]) continue;  // D U_zero = 0 kills these blocks
            auto factor_for = [&](int w) -> Matrix {
                if (w == m) return D * tf.marginals[w].U_plus;
                return blk.mask[w] ? tf.marginals[w].U_plus : tf.marginals[w].U_zero;
            };
            Matrix factor = factor_for(K - 1);
            for (int w = K - 2; w >= 0; --w) factor = kron(factor, factor_for(w));
            W[m].middleCols(blk.offset, blk.width) = factor;
        }
        psi[m] = penalty_weights(spec, m);
    }
    return PrecisionModel::from_factors(std::move(W), std::move(psi));
}

}  // namespace adaptps
