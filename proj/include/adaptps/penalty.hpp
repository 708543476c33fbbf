#ifndef ADAPTPS_PENALTY_HPP
#define ADAPTPS_PENALTY_HPP

#include "adaptps/basis.hpp"
#include "adaptps/types.hpp"

#include <array>
#include <string>
#include <vector>

namespace adaptps {

/// How the smoothing parameters along one covariate direction may vary.
///   None           - a single smoothing parameter (standard penalty term)
///   Full           - one parameter per coefficient difference, smoothed by a
///                    tensor-product basis
///   VaryWithOthers - constant along the direction itself, varying across the
///                    other covariates
///   VaryAlongSelf  - varying along the direction itself, constant across the
///                    other covariates
enum class AdaptivityMode { None, Full, VaryWithOthers, VaryAlongSelf };

AdaptivityMode parse_adaptivity_mode(const std::string& text);
std::string to_string(AdaptivityMode mode);

struct AdaptivePenaltySpec {
    std::vector<BasisSpec> dims;                 ///< 1-3 marginal bases
    std::vector<AdaptivityMode> modes;           ///< one mode per dimension
    std::vector<std::array<int, 3>> p;           ///< p[m][w]: smoother basis dims
    int psi_degree = 3;

    int n_dims() const { return static_cast<int>(dims.size()); }
    void validate() const;
};

/// One summand of an adaptive penalty: a symmetric PSD c x c matrix
/// penalising the coefficient differences of one covariate direction,
/// weighted by one column of that direction's smoothing-parameter basis.
struct PenaltyComponent {
    Matrix matrix;
    int dimension_tag = 0;  ///< 0-based covariate index
    int index = 0;          ///< 0-based position within the Psi expansion
};

/// B-spline design over the integer index domain 1..n_rows with p columns
/// (equally spaced knots). p = 1 returns the all-ones column.
Matrix psi_matrix(int n_rows, int p, int psi_degree);

Matrix standard_penalty_1d(double lambda, const BasisSpec& spec);
Matrix standard_penalty_2d(double lambda1, double lambda2,
                           const std::vector<BasisSpec>& specs);
Matrix standard_penalty_3d(double lambda1, double lambda2, double lambda3,
                           const std::vector<BasisSpec>& specs);

std::vector<PenaltyComponent> adaptive_components_1d(const BasisSpec& spec, int p,
                                                     int psi_degree = 3);
std::vector<PenaltyComponent> adaptive_components_2d(const AdaptivePenaltySpec& spec);
std::vector<PenaltyComponent> adaptive_components_3d(const AdaptivePenaltySpec& spec);
std::vector<PenaltyComponent> adaptive_components(const AdaptivePenaltySpec& spec);

/// Unreduced adaptive penalty with one parameter per coefficient difference;
/// serves as the oracle for the Psi-reduced component form.
Matrix adaptive_penalty_direct_2d(const Vector& lambda_vec, const Vector& lambda_tilde_vec,
                                  const std::vector<BasisSpec>& specs);
Matrix adaptive_penalty_direct_3d(const Vector& lambda1, const Vector& lambda2,
                                  const Vector& lambda3,
                                  const std::vector<BasisSpec>& specs);

/// Expanded difference operator for dimension m: the Kronecker product with
/// D_{q_m} in slot m and identities elsewhere (slot 0 varies fastest).
Matrix delta_operator(const std::vector<BasisSpec>& specs, int m);

/// Columns of the smoothing-parameter weight basis for dimension m under the
/// given mode: Full uses the Kronecker product of all marginal Psi factors,
/// the simplifications replace factors by ones columns.
Matrix penalty_weights(const AdaptivePenaltySpec& spec, int m);

}  // namespace adaptps

#endif
