#include "adaptps/sop.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace adaptps {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_finite(const Vector& v, const char* what) {
    if (!v.allFinite())
        throw std::invalid_argument(std::string(what) + " contains a non-finite value");
}

double clamp_sigma(double value, double floor_v, double ceil_v) {
    if (!std::isfinite(value) || value < floor_v) return floor_v;
    if (value > ceil_v) return ceil_v;
    return value;
}

}  // namespace

void FitControl::validate() const {
    if (max_outer_iter < 1 || max_pirls_iter < 1)
        throw std::invalid_argument("FitControl: iteration caps must be >= 1");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("FitControl: rel_tol must be > 0");
    if (!(initial_variance > 0.0))
        throw std::invalid_argument("FitControl: initial_variance must be > 0");
    if (!(variance_floor_ratio > 0.0 && variance_floor_ratio < 1.0))
        throw std::invalid_argument("FitControl: variance floor must lie in (0, 1)");
}

namespace {

// Core fixed-point step given G = (sum_l sigma_l^{-2} G_l)^{-1} and the
// posterior covariance phi (C^{-1})_{alpha alpha}.
std::pair<Vector, Vector> variance_step(const Vector& alpha_hat, const PrecisionModel& prec,
                                        const Vector& sigma2, const Matrix& G,
                                        const Matrix& C_alpha_cov) {
    const Index L = prec.n_components();
    if (sigma2.size() != L)
        throw std::invalid_argument("update_variances: sigma2 size mismatch");
    const double cov_scale = C_alpha_cov.diagonal().cwiseAbs().maxCoeff();
    if (C_alpha_cov.diagonal().minCoeff() < -1e-10 * cov_scale)
        throw std::runtime_error(
            "update_variances: posterior covariance has negative variances "
            "(upstream solver failure)");

    const Vector traces = prec.trace_products(G - C_alpha_cov);
    const Vector quads = prec.quad_forms(alpha_hat);

    Vector ed(L), sigma2_new(L);
    for (Index l = 0; l < L; ++l) {
        double e = traces[l] / sigma2[l];
        e = std::min(std::max(e, 0.0), static_cast<double>(prec.n_random()));
        ed[l] = e;
        const double q = std::max(quads[l], 0.0);
        sigma2_new[l] = (e > 1e-12) ? q / e : 0.0;
    }
    return {std::move(sigma2_new), std::move(ed)};
}

Matrix invert_precision(const Matrix& G_inv) {
    Eigen::LLT<Matrix> llt(G_inv);
    if (llt.info() == Eigen::Success)
        return llt.solve(Matrix::Identity(G_inv.rows(), G_inv.cols()));
    // Wide precision spreads can defeat the plain Cholesky; the pivoted
    // factorization still handles them.
    Eigen::LDLT<Matrix> ldlt(G_inv);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        throw std::runtime_error("update_variances: precision matrix is not positive definite");
    return ldlt.solve(Matrix::Identity(G_inv.rows(), G_inv.cols()));
}

}  // namespace

std::pair<Vector, Vector> update_variances(const Vector& alpha_hat, const PrecisionModel& prec,
                                           const Vector& sigma2, const Matrix& C_alpha_block,
                                           double phi) {
    const Matrix G = invert_precision(prec.assemble_precision(sigma2.cwiseInverse()));
    return variance_step(alpha_hat, prec, sigma2, G, phi * C_alpha_block);
}

FitResult fit_core(const Design& design, const PrecisionModel& prec, const Vector& y,
                   const Family& family, Vector offset, Vector weights,
                   const FitControl& control) {
    control.validate();
    const Index n = design.n();
    const Index p = design.n_fixed();
    const Index m = design.n_random();
    const Index L = prec.n_components();
    if (y.size() != n) throw std::invalid_argument("fit: response length mismatch");
    if (prec.n_random() != m)
        throw std::invalid_argument("fit: precision components do not match the random block");
    if (offset.size() == 0) offset = Vector::Zero(n);
    if (weights.size() == 0) weights = Vector::Ones(n);
    if (offset.size() != n || weights.size() != n)
        throw std::invalid_argument("fit: offset/weights length mismatch");
    require_finite(y, "response");
    require_finite(offset, "offset");
    require_finite(weights, "weights");
    if ((weights.array() < 0.0).any())
        throw std::invalid_argument("fit: weights must be non-negative");
    family.validate_response(y);
    design.check_fixed_rank();

    const bool gaussian = family.kind == FamilyKind::Gaussian;
    const double phi_init =
        gaussian ? std::max((y.array() - y.mean()).square().sum() / std::max<Index>(n - 1, 1),
                            1e-12)
                 : 1.0;
    const double sigma_floor = control.variance_floor_ratio * control.initial_variance;
    const double sigma_ceil = control.variance_ceiling_ratio * control.initial_variance;
    const double phi_floor = control.variance_floor_ratio * phi_init;

    FitResult res;
    res.n_obs = n;
    res.n_fixed = p;
    res.n_random = m;
    res.sigma2 = Vector::Constant(L, control.initial_variance);
    res.phi = phi_init;

    Vector eta = family.initial_eta(y);
    Vector mu = family.inv_link(eta);
    double dev = family.deviance(y, mu, weights);
    Vector coef = Vector::Zero(p + m);
    Vector ed = Vector::Zero(L);
    Vector gain = Vector::Ones(L);
    Vector prev_step = Vector::Zero(L);

    Eigen::LLT<Matrix> llt;
    Matrix A(p + m, p + m);
    Vector r(p + m);

    for (int outer = 1; outer <= control.max_outer_iter; ++outer) {
        res.outer_iterations = outer;
        const double dev_outer_start = dev;
        const Matrix G_inv = prec.assemble_precision(res.sigma2.cwiseInverse());

        // Penalized IRLS at the current variance parameters. The Gaussian
        // identity model is solved exactly in one pass. Step-halving guards
        // the penalized deviance within this loop; the first step is a full
        // Fisher step (the previous iterate belongs to the old penalty).
        const int inner_cap = gaussian ? 1 : control.max_pirls_iter;
        double pen_ref = std::numeric_limits<double>::infinity();
        for (int inner = 1; inner <= inner_cap; ++inner) {
            ++res.pirls_iterations;
            mu = family.inv_link(eta);
            Vector w_irls(n), z(n);
            for (Index i = 0; i < n; ++i) {
                const double nu = family.variance(mu[i]);
                w_irls[i] = weights[i] * (gaussian ? 1.0 : nu);
                z[i] = (eta[i] - offset[i]) + (gaussian ? (y[i] - mu[i]) : (y[i] - mu[i]) / nu);
            }
            design.gram(w_irls, z, A, r);
            Matrix C = A;
            C.bottomRightCorner(m, m) += res.phi * G_inv;
            llt.compute(C);
            if (llt.info() != Eigen::Success)
                throw std::runtime_error("fit: penalized coefficient matrix is not positive "
                                         "definite");
            Vector coef_new = llt.solve(r);
            Vector eta_new =
                design.linear_predictor(coef_new.head(p), coef_new.tail(m)) + offset;
            double dev_new = family.deviance(y, family.inv_link(eta_new), weights);
            auto penalized = [&](const Vector& cf, double d) {
                const auto a = cf.tail(m);
                return d + res.phi * a.dot(G_inv * a);
            };
            double pen_new = penalized(coef_new, dev_new);

            if (!gaussian && inner > 1) {
                const double slack = 1e-8 * (std::abs(pen_ref) + 1.0);
                int halvings = 0;
                while (pen_new > pen_ref + slack && halvings < 30) {
                    coef_new = 0.5 * (coef_new + coef);
                    eta_new = 0.5 * (eta_new + eta);
                    dev_new = family.deviance(y, family.inv_link(eta_new), weights);
                    pen_new = penalized(coef_new, dev_new);
                    ++halvings;
                }
                if (halvings >= 30 && pen_new > pen_ref + slack) {
                    res.pirls_aborted = true;
                    res.diagnostic = "PIRLS stopped at outer iteration " +
                                     std::to_string(outer) +
                                     ": no penalized-deviance improvement after 30 halvings";
                    break;  // keep the previous iterate
                }
            }

            const double rel = std::abs(dev_new - dev) / (std::abs(dev) + 0.1);
            coef = std::move(coef_new);
            eta = std::move(eta_new);
            dev = dev_new;
            pen_ref = pen_new;
            if (!gaussian && rel < control.rel_tol) break;
        }
        mu = family.inv_link(eta);

        // Posterior covariance of the random block from the same
        // factorization as the coefficient solve.
        Matrix rhs = Matrix::Zero(p + m, m);
        rhs.bottomRows(m).setIdentity();
        const Matrix C_alpha_cov = res.phi * llt.solve(rhs).bottomRows(m);

        const Matrix G = invert_precision(G_inv);
        auto [sigma2_new, ed_new] =
            variance_step(coef.tail(m), prec, res.sigma2, G, C_alpha_cov);
        // Damp the multiplicative step with a sign-adaptive gain. The raw
        // fixed-point update overshoots into period-2 cycles when many
        // overlapping components interact, while variances heading for a
        // boundary (lambda -> 0) move by a constant small factor and would
        // need hundreds of iterations at a fixed damping. Consecutive
        // same-sign steps grow the gain, a sign flip resets it; fixed points
        // are untouched.
        constexpr double kStepDamping = 0.5;
        constexpr double kMaxLogStep = 2.5;
        constexpr double kMaxGain = 8.0;
        for (Index l = 0; l < L; ++l) {
            if (sigma2_new[l] > 0.0 && res.sigma2[l] > 0.0) {
                const double raw = std::log(sigma2_new[l] / res.sigma2[l]);
                if (raw * prev_step[l] > 0.0)
                    gain[l] = std::min(gain[l] * 1.5, kMaxGain);
                else if (raw * prev_step[l] < 0.0)
                    gain[l] = std::max(gain[l] * 0.25, 0.5);
                prev_step[l] = raw;
                const double step =
                    std::clamp(kStepDamping * gain[l] * raw, -kMaxLogStep, kMaxLogStep);
                sigma2_new[l] = res.sigma2[l] * std::exp(step);
            } else {
                prev_step[l] = 0.0;
                gain[l] = 1.0;
            }
            sigma2_new[l] = clamp_sigma(sigma2_new[l], sigma_floor, sigma_ceil);
        }
        ed = ed_new;
        const double ed_total = static_cast<double>(p) + ed.sum();

        double phi_new = res.phi;
        if (gaussian) {
            double rss = 0.0;
            for (Index i = 0; i < n; ++i)
                rss += weights[i] * (y[i] - mu[i]) * (y[i] - mu[i]);
            const double denom = std::max(static_cast<double>(n) - ed_total, 1e-8);
            phi_new = std::max(rss / denom, phi_floor);
        }

        // Values within a decade of the floor or ceiling are pinned: a
        // component dithering at a bound must not hold up convergence.
        auto pinned = [&](double v) {
            return std::min(std::max(v, 10.0 * sigma_floor), 0.1 * sigma_ceil);
        };
        double sig_rel = 0.0;
        for (Index l = 0; l < L; ++l) {
            const double a = pinned(res.sigma2[l]);
            const double b = pinned(sigma2_new[l]);
            sig_rel = std::max(sig_rel, std::abs(b - a) / a);
        }
        {
            const double a = std::max(res.phi, 10.0 * phi_floor);
            const double b = std::max(phi_new, 10.0 * phi_floor);
            sig_rel = std::max(sig_rel, std::abs(b - a) / a);
        }
        const double dev_rel = std::abs(dev - dev_outer_start) / (std::abs(dev_outer_start) + 0.1);

        res.sigma2 = std::move(sigma2_new);
        res.phi = phi_new;
        res.trace.push_back({outer, dev, res.phi, res.sigma2});

        if (outer > 1 && sig_rel < control.rel_tol && dev_rel < control.rel_tol) {
            res.converged = true;
            break;
        }
    }

    res.beta = coef.head(p);
    res.alpha = coef.tail(m);
    res.deviance = dev;
    res.ed_per_component = ed;
    // A variance pinned at the floor means the component was switched off;
    // its trace-based dimension is then numerical noise, reported as zero.
    for (Index l = 0; l < L; ++l)
        if (res.sigma2[l] <= 10.0 * sigma_floor) res.ed_per_component[l] = 0.0;
    res.ed_fixed = static_cast<double>(p);
    res.ed_total = res.ed_fixed + res.ed_per_component.sum();
    res.caic = res.deviance + 2.0 * res.ed_total;
    res.coef_chol = llt.matrixL();
    return res;
}

FitResult fit(const Matrix& X, const Matrix& Z, const std::vector<Matrix>& G_components,
              const Vector& y, const Family& family, const Vector& offset,
              const Vector& weights, const FitControl& control) {
    std::vector<ComponentTag> tags(G_components.size());
    for (size_t l = 0; l < tags.size(); ++l) tags[l] = {0, static_cast<int>(l)};
    const PrecisionModel prec = PrecisionModel::from_dense(G_components, std::move(tags));
    DenseDesign design(X, Z);
    return fit_core(design, prec, y, family, offset, weights, control);
}

double reml_loglik(const Vector& y, const Matrix& X, const Matrix& Z,
                   const std::vector<Matrix>& G_components, const Vector& sigma2, double phi) {
    const Index n = y.size();
    const Index p = X.cols();
    if (Z.rows() != n || X.rows() != n)
        throw std::invalid_argument("reml_loglik: dimension mismatch");
    Matrix G_inv = Matrix::Zero(Z.cols(), Z.cols());
    if (static_cast<Index>(G_components.size()) != sigma2.size())
        throw std::invalid_argument("reml_loglik: one variance per component required");
    for (size_t l = 0; l < G_components.size(); ++l)
        G_inv += G_components[l] / sigma2[static_cast<Index>(l)];
    Eigen::LLT<Matrix> llt_ginv(G_inv);
    if (llt_ginv.info() != Eigen::Success)
        throw std::runtime_error("reml_loglik: G^{-1} is not positive definite");
    const Matrix G = llt_ginv.solve(Matrix::Identity(Z.cols(), Z.cols()));

    Matrix V = phi * Matrix::Identity(n, n);
    V.noalias() += Z * G * Z.transpose();
    Eigen::LLT<Matrix> llt_v(V);
    if (llt_v.info() != Eigen::Success)
        throw std::runtime_error("reml_loglik: V is not positive definite");
    double logdet_v = 0.0;
    for (Index i = 0; i < n; ++i) logdet_v += 2.0 * std::log(llt_v.matrixLLT()(i, i));

    const Matrix Vinv_X = llt_v.solve(X);
    const Vector Vinv_y = llt_v.solve(y);
    const Matrix XtVinvX = X.transpose() * Vinv_X;
    Eigen::LLT<Matrix> llt_x(XtVinvX);
    if (llt_x.info() != Eigen::Success)
        throw std::runtime_error("reml_loglik: X^T V^{-1} X is not positive definite");
    double logdet_x = 0.0;
    for (Index i = 0; i < p; ++i) logdet_x += 2.0 * std::log(llt_x.matrixLLT()(i, i));

    const Vector Xt_Vinv_y = X.transpose() * Vinv_y;
    const double quad = y.dot(Vinv_y) - Xt_Vinv_y.dot(llt_x.solve(Xt_Vinv_y));
    return -0.5 * (logdet_v + logdet_x + quad +
                   static_cast<double>(n - p) * std::log(2.0 * kPi));
}

double caic(const FitResult& fit) { return fit.deviance + 2.0 * fit.ed_total; }

}  // namespace adaptps
