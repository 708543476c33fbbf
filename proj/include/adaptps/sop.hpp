#ifndef ADAPTPS_SOP_HPP
#define ADAPTPS_SOP_HPP

#include "adaptps/design.hpp"
#include "adaptps/family.hpp"
#include "adaptps/precision.hpp"
#include "adaptps/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace adaptps {

struct FitControl {
    int max_outer_iter = 200;
    int max_pirls_iter = 100;
    double rel_tol = 1e-6;
    double initial_variance = 1.0;
    /// Floors are relative to the initial values (dispersion included) so a
    /// parameter driven to zero keeps the precision matrix well defined.
    double variance_floor_ratio = 1e-10;
    /// Upper bound where an effectively unpenalized component parks; also
    /// keeps G^{-1} numerically invertible.
    double variance_ceiling_ratio = 1e6;

    void validate() const;
};

struct TraceRow {
    int outer = 0;
    double deviance = 0.0;
    double phi = 1.0;
    Vector sigma2;
};

struct FitResult {
    Vector beta, alpha;
    Vector theta;  ///< T_zero beta + T_plus alpha; filled by the model layer
    Vector sigma2;
    double phi = 1.0;
    Vector ed_per_component;  ///< components at the variance floor report 0
    double ed_fixed = 0.0;
    double ed_total = 0.0;
    double deviance = 0.0;
    double caic = 0.0;
    bool converged = false;
    bool pirls_aborted = false;
    std::string diagnostic;  ///< set when an inner loop had to be abandoned
    int outer_iterations = 0;
    int pirls_iterations = 0;
    std::vector<TraceRow> trace;
    /// Lower Cholesky factor of the final penalized coefficient matrix C;
    /// phi * C^{-1} is the Bayesian posterior covariance used for intervals.
    Matrix coef_chol;
    Index n_obs = 0, n_fixed = 0, n_random = 0;
};

/// SOP estimation: penalized IRLS inner solves alternating with fixed-point
/// variance updates; stops when the deviance and every variance parameter
/// are stable to rel_tol. Hitting the iteration cap reports converged=false.
FitResult fit_core(const Design& design, const PrecisionModel& prec, const Vector& y,
                   const Family& family, Vector offset, Vector weights,
                   const FitControl& control);

/// Convenience entry for explicit design and precision matrices.
FitResult fit(const Matrix& X, const Matrix& Z, const std::vector<Matrix>& G_components,
              const Vector& y, const Family& family, const Vector& offset = Vector(),
              const Vector& weights = Vector(), const FitControl& control = FitControl());

/// One fixed-point update: ED_l = trace(G_l (G - C_alpha_cov)) / sigma2_l and
/// sigma2_l <- alpha^T G_l alpha / ED_l, where C_alpha_cov = phi * (C^{-1})
/// restricted to the random block. Returns (sigma2_new, ed). No floors are
/// applied here.
std::pair<Vector, Vector> update_variances(const Vector& alpha_hat, const PrecisionModel& prec,
                                           const Vector& sigma2, const Matrix& C_alpha_cov,
                                           double phi);

/// Explicit Gaussian restricted log-likelihood through V = phi I + Z G Z^T;
/// the oracle for the variance updates.
double reml_loglik(const Vector& y, const Matrix& X, const Matrix& Z,
                   const std::vector<Matrix>& G_components, const Vector& sigma2, double phi);

double caic(const FitResult& fit);

}  // namespace adaptps

#endif
