#ifndef ADAPTPS_PRECISION_HPP
#define ADAPTPS_PRECISION_HPP

#include "adaptps/mmtransform.hpp"
#include "adaptps/penalty.hpp"
#include "adaptps/types.hpp"

#include <vector>

namespace adaptps {

struct ComponentTag {
    int dimension = 0;  ///< 0-based covariate index
    int index = 0;      ///< position within that dimension's expansion
};

/// The list of random-effects precision summands G_l, with the bulk
/// operations the variance updates need. Two representations:
///  - dense: each G_l held explicitly;
///  - factored: G_l = W_m^T diag(psi) W_m with W_m = Delta_m T_plus shared by
///    all components of dimension m, so traces and quadratic forms for a
///    whole dimension cost one matrix product.
class PrecisionModel {
public:
    static PrecisionModel from_dense(std::vector<Matrix> components,
                                     std::vector<ComponentTag> tags);
    static PrecisionModel from_factors(std::vector<Matrix> W, std::vector<Matrix> psi);

    Index n_components() const { return static_cast<Index>(tags_.size()); }
    Index n_random() const { return n_random_; }
    const ComponentTag& tag(Index l) const { return tags_[l]; }

    /// G^{-1} = sum_l sigma2inv_l G_l.
    Matrix assemble_precision(const Vector& sigma2_inv) const;

    /// alpha^T G_l alpha for every l.
    Vector quad_forms(const Vector& alpha) const;

    /// trace(G_l M) for every l (M symmetric n_random x n_random).
    Vector trace_products(const Matrix& M) const;

    Matrix dense_component(Index l) const;

private:
    bool factored_ = false;
    Index n_random_ = 0;
    std::vector<ComponentTag> tags_;
    // dense representation
    std::vector<Matrix> dense_;
    // factored representation
    std::vector<Matrix> W_;    ///< one per dimension, rows(Delta_m) x n_random
    std::vector<Matrix> psi_;  ///< one per dimension, rows(Delta_m) x P_m
    std::vector<std::pair<int, Index>> flat_;  ///< component -> (dim, column)
};

/// Build the factored precision model for an adaptive penalty specification:
/// W_m = Delta_m T_plus assembled blockwise from the Kronecker structure
/// (blocks whose dimension-m factor is U_zero vanish identically).
PrecisionModel build_precision_factors(const AdaptivePenaltySpec& spec, const Transforms& tf);

}  // namespace adaptps

#endif
