#include "adaptps/penalty.hpp"

#include <stdexcept>
#include <string>

namespace adaptps {

namespace {

Matrix penalty_kernel(const BasisSpec& spec) {
    const Matrix D = diff_matrix(spec.d, spec.q);
    return D.transpose() * D;
}

void require_positive(double lambda, const char* who) {
    if (!(lambda > 0.0))
        throw std::invalid_argument(std::string(who) + ": smoothing parameters must be > 0");
}

// Kronecker chain over dimensions K-1 .. 0 with `make(w)` supplying factor w.
template <typename F>
Matrix kron_chain(int K, F&& make) {
    Matrix out = make(K - 1);
    for (int w = K - 2; w >= 0; --w) out = kron(out, make(w));
    return out;
}

}  // namespace

AdaptivityMode parse_adaptivity_mode(const std::string& text) {
    if (text == "none") return AdaptivityMode::None;
    if (text == "full") return AdaptivityMode::Full;
    if (text == "vary_with_others") return AdaptivityMode::VaryWithOthers;
    if (text == "vary_along_self") return AdaptivityMode::VaryAlongSelf;
    throw std::invalid_argument("unknown adaptivity mode '" + text + "'");
}

std::string to_string(AdaptivityMode mode) {
    switch (mode) {
        case AdaptivityMode::None: return "none";
        case AdaptivityMode::Full: return "full";
        case AdaptivityMode::VaryWithOthers: return "vary_with_others";
        case AdaptivityMode::VaryAlongSelf: return "vary_along_self";
    }
    return "none";
}

void AdaptivePenaltySpec::validate() const {
    const int K = n_dims();
    if (K < 1 || K > 3)
        throw std::invalid_argument("AdaptivePenaltySpec: 1 to 3 dimensions supported");
    if (static_cast<int>(modes.size()) != K || static_cast<int>(p.size()) != K)
        throw std::invalid_argument("AdaptivePenaltySpec: modes and p must match dims");
    for (const BasisSpec& s : dims) s.validate();
    for (int m = 0; m < K; ++m) {
        Index n_diff = 1;
        Index n_params = 1;
        for (int w = 0; w < K; ++w) {
            const Index rows = (w == m) ? dims[w].d - dims[w].q : dims[w].d;
            n_diff *= rows;
            bool uses_basis = false;
            switch (modes[m]) {
                case AdaptivityMode::None: break;
                case AdaptivityMode::Full: uses_basis = true; break;
                case AdaptivityMode::VaryWithOthers: uses_basis = (w != m); break;
                case AdaptivityMode::VaryAlongSelf: uses_basis = (w == m); break;
            }
            if (uses_basis) {
                if (p[m][w] < 1)
                    throw std::invalid_argument("AdaptivePenaltySpec: every p must be >= 1");
                if (p[m][w] > rows)
                    throw std::invalid_argument(
                        "AdaptivePenaltySpec: smoother basis larger than its target (p > rows)");
                n_params *= p[m][w];
            }
        }
        if (modes[m] == AdaptivityMode::Full && n_params >= n_diff)
            throw std::invalid_argument(
                "AdaptivePenaltySpec: full adaptivity requires fewer smoothing parameters "
                "than coefficient differences along dimension " + std::to_string(m + 1));
    }
}

Matrix psi_matrix(int n_rows, int p, int psi_degree) {
    if (n_rows < 1) throw std::invalid_argument("psi_matrix: n_rows must be >= 1");
    if (p < 1) throw std::invalid_argument("psi_matrix: p must be >= 1");
    if (p > n_rows)
        throw std::invalid_argument("psi_matrix: smoother dimension p exceeds target size");
    if (p == 1) return Matrix::Ones(n_rows, 1);
    if (p <= psi_degree)
        throw std::invalid_argument("psi_matrix: p must exceed the smoother degree");
    BasisSpec spec;
    spec.x_min = 1.0;
    spec.x_max = static_cast<double>(n_rows);
    spec.d = p;
    spec.degree = psi_degree;
    spec.q = 1;  // irrelevant for evaluation, must satisfy the invariants
    Vector idx(n_rows);
    for (int i = 0; i < n_rows; ++i) idx[i] = static_cast<double>(i + 1);
    return eval_basis(idx, spec);
}

Matrix standard_penalty_1d(double lambda, const BasisSpec& spec) {
    require_positive(lambda, "standard_penalty_1d");
    spec.validate();
    return lambda * penalty_kernel(spec);
}

Matrix standard_penalty_2d(double lambda1, double lambda2,
                           const std::vector<BasisSpec>& specs) {
    if (specs.size() != 2) throw std::invalid_argument("standard_penalty_2d: two specs required");
    require_positive(lambda1, "standard_penalty_2d");
    require_positive(lambda2, "standard_penalty_2d");
    for (const BasisSpec& s : specs) s.validate();
    const Matrix I1 = Matrix::Identity(specs[0].d, specs[0].d);
    const Matrix I2 = Matrix::Identity(specs[1].d, specs[1].d);
    return lambda1 * kron(I2, penalty_kernel(specs[0])) +
           lambda2 * kron(penalty_kernel(specs[1]), I1);
}

Matrix standard_penalty_3d(double lambda1, double lambda2, double lambda3,
                           const std::vector<BasisSpec>& specs) {
    if (specs.size() != 3) throw std::invalid_argument("standard_penalty_3d: three specs required");
    require_positive(lambda1, "standard_penalty_3d");
    require_positive(lambda2, "standard_penalty_3d");
    require_positive(lambda3, "standard_penalty_3d");
    for (const BasisSpec& s : specs) s.validate();
    const Matrix I1 = Matrix::Identity(specs[0].d, specs[0].d);
    const Matrix I2 = Matrix::Identity(specs[1].d, specs[1].d);
    const Matrix I3 = Matrix::Identity(specs[2].d, specs[2].d);
    return lambda1 * kron(I3, kron(I2, penalty_kernel(specs[0]))) +
           lambda2 * kron(I3, kron(penalty_kernel(specs[1]), I1)) +
           lambda3 * kron(penalty_kernel(specs[2]), kron(I2, I1));
}

Matrix delta_operator(const std::vector<BasisSpec>& specs, int m) {
    const int K = static_cast<int>(specs.size());
    if (m < 0 || m >= K) throw std::invalid_argument("delta_operator: dimension out of range");
    return kron_chain(K, [&](int w) -> Matrix {
        if (w == m) return diff_matrix(specs[w].d, specs[w].q);
        return Matrix::Identity(specs[w].d, specs[w].d);
    });
}

Matrix penalty_weights(const AdaptivePenaltySpec& spec, int m) {
    const int K = spec.n_dims();
    return kron_chain(K, [&](int w) -> Matrix {
        const Index rows = (w == m) ? spec.dims[w].d - spec.dims[w].q : spec.dims[w].d;
        bool uses_basis = false;
        switch (spec.modes[m]) {
            case AdaptivityMode::None: break;
            case AdaptivityMode::Full: uses_basis = true; break;
            case AdaptivityMode::VaryWithOthers: uses_basis = (w != m); break;
            case AdaptivityMode::VaryAlongSelf: uses_basis = (w == m); break;
        }
        if (!uses_basis) return Matrix::Ones(rows, 1);
        return psi_matrix(static_cast<int>(rows), spec.p[m][w], spec.psi_degree);
    });
}

std::vector<PenaltyComponent> adaptive_components(const AdaptivePenaltySpec& spec) {
    spec.validate();
    const int K = spec.n_dims();
    std::vector<PenaltyComponent> out;
    for (int m = 0; m < K; ++m) {
        if (spec.modes[m] == AdaptivityMode::None) {
            // Ones weights collapse to the standard term; build it in the
            // same Kronecker form as the standard penalty so the collapse
            // identity is exact.
            Matrix term = kron_chain(K, [&](int w) -> Matrix {
                if (w == m) return penalty_kernel(spec.dims[w]);
                return Matrix::Identity(spec.dims[w].d, spec.dims[w].d);
            });
            out.push_back({std::move(term), m, 0});
            continue;
        }
        const Matrix delta = delta_operator(spec.dims, m);
        const Matrix psi = penalty_weights(spec, m);
        for (Index j = 0; j < psi.cols(); ++j) {
            Matrix comp = delta.transpose() * psi.col(j).asDiagonal() * delta;
            out.push_back({std::move(comp), m, static_cast<int>(j)});
        }
    }
    return out;
}

std::vector<PenaltyComponent> adaptive_components_1d(const BasisSpec& spec, int p,
                                                     int psi_degree) {
    spec.validate();
    if (p < 1 || p > spec.d - spec.q)
        throw std::invalid_argument("adaptive_components_1d: p must satisfy 1 <= p <= d - q");
    if (p == 1) {
        // A single ones column: exactly the standard penalty kernel.
        return {{penalty_kernel(spec), 0, 0}};
    }
    const Matrix D = diff_matrix(spec.d, spec.q);
    const Matrix psi = psi_matrix(spec.d - spec.q, p, psi_degree);
    std::vector<PenaltyComponent> out;
    for (Index j = 0; j < psi.cols(); ++j) {
        Matrix comp = D.transpose() * psi.col(j).asDiagonal() * D;
        out.push_back({std::move(comp), 0, static_cast<int>(j)});
    }
    return out;
}

std::vector<PenaltyComponent> adaptive_components_2d(const AdaptivePenaltySpec& spec) {
    if (spec.n_dims() != 2)
        throw std::invalid_argument("adaptive_components_2d: spec must have 2 dimensions");
    return adaptive_components(spec);
}

std::vector<PenaltyComponent> adaptive_components_3d(const AdaptivePenaltySpec& spec) {
    if (spec.n_dims() != 3)
        throw std::invalid_argument("adaptive_components_3d: spec must have 3 dimensions");
    return adaptive_components(spec);
}

namespace {

Matrix direct_term(const std::vector<BasisSpec>& specs, int m, const Vector& lambda) {
    const Matrix delta = delta_operator(specs, m);
    if (lambda.size() != delta.rows())
        throw std::invalid_argument("adaptive_penalty_direct: smoothing vector for dimension " +
                                    std::to_string(m + 1) + " must have length " +
                                    std::to_string(delta.rows()));
    if ((lambda.array() < 0.0).any())
        throw std::invalid_argument("adaptive_penalty_direct: smoothing parameters must be >= 0");
    return delta.transpose() * lambda.asDiagonal() * delta;
}

}  // namespace

Matrix adaptive_penalty_direct_2d(const Vector& lambda_vec, const Vector& lambda_tilde_vec,
                                  const std::vector<BasisSpec>& specs) {
    if (specs.size() != 2)
        throw std::invalid_argument("adaptive_penalty_direct_2d: two specs required");
    for (const BasisSpec& s : specs) s.validate();
    return direct_term(specs, 0, lambda_vec) + direct_term(specs, 1, lambda_tilde_vec);
}

Matrix adaptive_penalty_direct_3d(const Vector& lambda1, const Vector& lambda2,
                                  const Vector& lambda3,
                                  const std::vector<BasisSpec>& specs) {
    if (specs.size() != 3)
        throw std::invalid_argument("adaptive_penalty_direct_3d: three specs required");
    for (const BasisSpec& s : specs) s.validate();
    return direct_term(specs, 0, lambda1) + direct_term(specs, 1, lambda2) +
           direct_term(specs, 2, lambda3);
}

}  // namespace adaptps
