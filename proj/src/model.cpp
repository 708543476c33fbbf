#include "adaptps/model.hpp"

#include "adaptps/rng.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace adaptps {

ModelParts build_model_parts(const ModelSpec& spec) {
    spec.validate();
    std::vector<MarginalEVD> evds;
    for (const BasisSpec& b : spec.penalty.dims) evds.push_back(marginal_evd(b));
    Transforms tf = build_transforms(evds);
    PrecisionModel prec = build_precision_factors(spec.penalty, tf);
    return ModelParts{spec, std::move(tf), std::move(prec)};
}

ModelFit fit_model(const ModelSpec& spec, const GridDataset& data, const FitControl& control) {
    spec.validate();
    const int K = spec.n_dims();
    if (data.n_dims() != K)
        throw std::invalid_argument("fit_model: dataset has " + std::to_string(data.n_dims()) +
                                    " covariates but the model expects " + std::to_string(K));
    if (data.n() < 1) throw std::invalid_argument("fit_model: empty dataset");

    ModelParts parts = build_model_parts(spec);

    ModelFit out;
    out.spec = spec;
    for (int k = 0; k < K; ++k)
        out.domain.push_back({spec.penalty.dims[k].x_min, spec.penalty.dims[k].x_max});

    if (data.is_grid) {
        std::vector<Matrix> B_margins;
        for (int k = 0; k < K; ++k)
            B_margins.push_back(eval_basis(data.axes[k], spec.penalty.dims[k]));
        GridDesign design(std::move(B_margins), parts.transforms);
        out.result = fit_core(design, parts.precision, data.y, spec.family, data.offset,
                              Vector(), control);
    } else {
        std::vector<Matrix> B_margins;
        for (int k = 0; k < K; ++k)
            B_margins.push_back(eval_basis(data.x.col(k), spec.penalty.dims[k]));
        auto [X, Z] = build_design(B_margins, parts.transforms);
        DenseDesign design(std::move(X), std::move(Z));
        out.result = fit_core(design, parts.precision, data.y, spec.family, data.offset,
                              Vector(), control);
    }
    out.result.theta = parts.transforms.T_zero * out.result.beta +
                       parts.transforms.T_plus * out.result.alpha;
    return out;
}

PredictionTable predict(const ModelFit& fit, const Matrix& new_x, double level) {
    const int K = fit.spec.n_dims();
    if (new_x.cols() != K)
        throw std::invalid_argument("predict: points must have " + std::to_string(K) +
                                    " columns");
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("predict: level must lie in (0, 1)");

    // Reject out-of-domain points up front, listing the offending rows.
    std::ostringstream bad;
    int n_bad = 0;
    for (Index i = 0; i < new_x.rows(); ++i) {
        for (int k = 0; k < K; ++k) {
            const double v = new_x(i, k);
            if (v < fit.domain[k][0] || v > fit.domain[k][1]) {
                if (n_bad < 20) bad << (n_bad ? ", " : "") << i;
                ++n_bad;
                break;
            }
        }
    }
    if (n_bad > 0)
        throw std::invalid_argument("predict: " + std::to_string(n_bad) +
                                    " point(s) outside the training domain (rows " + bad.str() +
                                    ")");

    std::vector<MarginalEVD> evds;
    for (const BasisSpec& b : fit.spec.penalty.dims) evds.push_back(marginal_evd(b));
    const Transforms tf = build_transforms(evds);
    std::vector<Matrix> B_margins;
    for (int k = 0; k < K; ++k)
        B_margins.push_back(eval_basis(new_x.col(k), fit.spec.penalty.dims[k]));
    auto [X, Z] = build_design(B_margins, tf);

    const FitResult& r = fit.result;
    const Index nc = r.coef_chol.rows();
    if (nc != X.cols() + Z.cols())
        throw std::invalid_argument("predict: fit artifact does not match the model");

    PredictionTable table;
    table.x = new_x;
    table.eta_hat = X * r.beta + Z * r.alpha;
    table.mu_hat = fit.spec.family.inv_link(table.eta_hat);
    table.se_eta.resize(new_x.rows());
    table.lower.resize(new_x.rows());
    table.upper.resize(new_x.rows());

    const double zq = inverse_normal_cdf(0.5 * (1.0 + level));
    const auto Lfac = r.coef_chol.triangularView<Eigen::Lower>();
    Vector row(nc);
    for (Index i = 0; i < new_x.rows(); ++i) {
        row.head(X.cols()) = X.row(i);
        row.tail(Z.cols()) = Z.row(i);
        // se^2 = phi * row^T C^{-1} row via one triangular solve.
        const Vector s = Lfac.solve(row);
        const double se = std::sqrt(std::max(r.phi * s.squaredNorm(), 0.0));
        table.se_eta[i] = se;
        table.lower[i] = fit.spec.family.inv_link(table.eta_hat[i] - zq * se);
        table.upper[i] = fit.spec.family.inv_link(table.eta_hat[i] + zq * se);
    }
    return table;
}

}  // namespace adaptps
