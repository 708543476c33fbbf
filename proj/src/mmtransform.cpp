#include "adaptps/mmtransform.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace adaptps {

MarginalEVD marginal_evd(const BasisSpec& spec) {
    spec.validate();
    const Matrix D = diff_matrix(spec.d, spec.q);
    const Matrix K = D.transpose() * D;
    Eigen::SelfAdjointEigenSolver<Matrix> es(K);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("marginal_evd: eigendecomposition failed");
    Vector evals = es.eigenvalues();  // ascending
    Matrix evecs = es.eigenvectors();

    // Pin eigenvector signs: first entry of non-negligible magnitude positive.
    for (Index j = 0; j < evecs.cols(); ++j) {
        const double scale = evecs.col(j).cwiseAbs().maxCoeff();
        for (Index i = 0; i < evecs.rows(); ++i) {
            if (std::abs(evecs(i, j)) > 1e-10 * scale) {
                if (evecs(i, j) < 0.0) evecs.col(j) *= -1.0;
                break;
            }
        }
    }

    const double tol = 1e-10 * evals[evals.size() - 1];
    Index n_zero = 0;
    while (n_zero < evals.size() && evals[n_zero] < tol) ++n_zero;
    if (n_zero != spec.q)
        throw std::runtime_error("marginal_evd: detected null-space dimension " +
                                 std::to_string(n_zero) + " but penalty order is " +
                                 std::to_string(spec.q));

    MarginalEVD out;
    out.U_zero = evecs.leftCols(n_zero);
    out.U_plus = evecs.rightCols(evals.size() - n_zero);
    out.Sigma_plus = evals.tail(evals.size() - n_zero);
    return out;
}

namespace {

int popcount(const std::vector<bool>& mask) {
    int c = 0;
    for (bool b : mask) c += b ? 1 : 0;
    return c;
}

Index mask_value(const std::vector<bool>& mask) {
    Index v = 0;
    for (size_t w = 0; w < mask.size(); ++w)
        if (mask[w]) v += Index(1) << w;
    return v;
}

// Kronecker chain of the selected factors, dimension K-1 outermost.
Matrix block_matrix(const std::vector<MarginalEVD>& evds, const std::vector<bool>& mask) {
    const int K = static_cast<int>(evds.size());
    Matrix out = mask[K - 1] ? evds[K - 1].U_plus : evds[K - 1].U_zero;
    for (int w = K - 2; w >= 0; --w)
        out = kron(out, mask[w] ? evds[w].U_plus : evds[w].U_zero);
    return out;
}

}  // namespace

Transforms build_transforms(const std::vector<MarginalEVD>& evds) {
    const int K = static_cast<int>(evds.size());
    if (K < 1 || K > 3)
        throw std::invalid_argument("build_transforms: 1 to 3 marginals supported");

    Transforms tf;
    tf.marginals = evds;
    tf.T_zero = block_matrix(evds, std::vector<bool>(K, false));

    // All masks except all-zero, ordered by popcount then by mask value so
    // the 2-D layout is [01, 10, 11] and the 3-D one the seven-block order.
    std::vector<std::vector<bool>> masks;
    for (Index v = 1; v < (Index(1) << K); ++v) {
        std::vector<bool> mask(K);
        for (int w = 0; w < K; ++w) mask[w] = (v >> w) & 1;
        masks.push_back(std::move(mask));
    }
    std::sort(masks.begin(), masks.end(), [](const auto& a, const auto& b) {
        const int pa = popcount(a), pb = popcount(b);
        if (pa != pb) return pa < pb;
        return mask_value(a) < mask_value(b);
    });

    Index total = 0;
    std::vector<Matrix> block_mats;
    for (const auto& mask : masks) {
        Matrix M = block_matrix(evds, mask);
        TransformBlock blk;
        blk.mask = mask;
        blk.offset = total;
        blk.width = M.cols();
        total += M.cols();
        tf.blocks.push_back(std::move(blk));
        block_mats.push_back(std::move(M));
    }
    tf.T_plus.resize(block_mats[0].rows(), total);
    for (size_t b = 0; b < block_mats.size(); ++b)
        tf.T_plus.middleCols(tf.blocks[b].offset, tf.blocks[b].width) = block_mats[b];
    return tf;
}

namespace {

// Box-product chain of per-dimension factors, dimension K-1 outermost.
Matrix box_chain(const std::vector<Matrix>& factors) {
    const int K = static_cast<int>(factors.size());
    Matrix out = factors[K - 1];
    for (int w = K - 2; w >= 0; --w) out = box_product(out, factors[w]);
    return out;
}

}  // namespace

std::pair<Matrix, Matrix> build_design(const std::vector<Matrix>& B_margins,
                                       const Transforms& tf) {
    const int K = static_cast<int>(B_margins.size());
    if (K != static_cast<int>(tf.marginals.size()))
        throw std::invalid_argument("build_design: marginal count mismatch");
    for (int w = 0; w < K; ++w)
        if (B_margins[w].cols() != tf.marginals[w].U_zero.rows())
            throw std::invalid_argument("build_design: design matrix for dimension " +
                                        std::to_string(w + 1) + " does not match the basis");

    std::vector<Matrix> zero_parts(K), plus_parts(K);
    for (int w = 0; w < K; ++w) {
        zero_parts[w] = B_margins[w] * tf.marginals[w].U_zero;
        plus_parts[w] = B_margins[w] * tf.marginals[w].U_plus;
    }

    Matrix X = box_chain(zero_parts);
    Matrix Z(X.rows(), tf.n_random());
    for (const TransformBlock& blk : tf.blocks) {
        std::vector<Matrix> factors(K);
        for (int w = 0; w < K; ++w) factors[w] = blk.mask[w] ? plus_parts[w] : zero_parts[w];
        Z.middleCols(blk.offset, blk.width) = box_chain(factors);
    }
    return {std::move(X), std::move(Z)};
}

std::vector<Matrix> build_G_components(const Matrix& T_plus,
                                       const std::vector<PenaltyComponent>& components) {
    std::vector<Matrix> out;
    out.reserve(components.size());
    for (const PenaltyComponent& c : components) {
        if (c.matrix.rows() != T_plus.rows())
            throw std::invalid_argument("build_G_components: component size mismatch");
        out.push_back(T_plus.transpose() * c.matrix * T_plus);
    }
    return out;
}

}  // namespace adaptps
