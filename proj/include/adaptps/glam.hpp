#ifndef ADAPTPS_GLAM_HPP
#define ADAPTPS_GLAM_HPP

#include "adaptps/types.hpp"

#include <vector>

namespace adaptps {

/// Rotated H-transform: applies M along the first axis of A and rotates the
/// axis order by one, so K successive applications with M_1, ..., M_K compute
/// (M_K kron ... kron M_1) vec(A) without forming the Kronecker product.
GridArray rh_transform(const Matrix& M, const GridArray& A);

/// Fitted linear predictor on the full grid: B vec(Theta) reshaped, where B
/// is the tensor-product design implied by the marginal matrices.
GridArray glam_fitted(const std::vector<Matrix>& B_margins, const GridArray& theta);

/// B^T diag(vec W) B for grid data, computed from the marginal design
/// matrices without materialising B.
Matrix glam_weighted_inner(const std::vector<Matrix>& B_margins, const GridArray& W);

/// B^T (vec V) for grid data V, again without materialising B.
Vector glam_weighted_rhs(const std::vector<Matrix>& B_margins, const GridArray& V);

}  // namespace adaptps

#endif
