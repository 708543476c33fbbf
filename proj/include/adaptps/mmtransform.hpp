#ifndef ADAPTPS_MMTRANSFORM_HPP
#define ADAPTPS_MMTRANSFORM_HPP

#include "adaptps/basis.hpp"
#include "adaptps/penalty.hpp"
#include "adaptps/types.hpp"

#include <vector>

namespace adaptps {

/// Eigendecomposition of D_q^T D_q split into null-space and positive parts.
/// [U_zero | U_plus] is orthonormal; eigenvalues ascend and eigenvector signs
/// are pinned (first nonzero entry positive) for reproducible fits.
struct MarginalEVD {
    Matrix U_plus;     ///< d x (d-q) eigenvectors with positive eigenvalues
    Matrix U_zero;     ///< d x q null-space eigenvectors
    Vector Sigma_plus; ///< the positive eigenvalues, ascending
};

MarginalEVD marginal_evd(const BasisSpec& spec);

/// One Kronecker block of T_plus: mask[w] says whether dimension w takes its
/// U_plus (true) or U_zero (false) factor.
struct TransformBlock {
    std::vector<bool> mask;
    Index offset = 0;  ///< first column of this block within T_plus
    Index width = 0;
};

/// Orthonormal coefficient-space transform theta = T_zero beta + T_plus alpha.
struct Transforms {
    std::vector<MarginalEVD> marginals;
    Matrix T_zero;
    Matrix T_plus;
    std::vector<TransformBlock> blocks;

    Index n_fixed() const { return T_zero.cols(); }
    Index n_random() const { return T_plus.cols(); }
};

/// T_zero is the Kronecker product of the null-space factors; T_plus
/// concatenates the mixed blocks ordered by the number of U_plus factors and
/// then by position (dimension 1 first), matching the 2-D and 3-D layouts.
Transforms build_transforms(const std::vector<MarginalEVD>& evds);

/// Mixed-model design: X = B T_zero, Z = B T_plus, assembled blockwise from
/// box products of the transformed marginal designs.
std::pair<Matrix, Matrix> build_design(const std::vector<Matrix>& B_margins,
                                       const Transforms& tf);

/// Random-effects precision summands G_l = T_plus^T P_l T_plus.
std::vector<Matrix> build_G_components(const Matrix& T_plus,
                                       const std::vector<PenaltyComponent>& components);

}  // namespace adaptps

#endif
