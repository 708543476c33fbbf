#include "adaptps/mmtransform.hpp"

#include "adaptps/precision.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

using namespace adaptps;
using namespace adaptps::testing;

namespace {

Matrix concat_T(const Transforms& tf) {
    Matrix T(tf.T_zero.rows(), tf.n_fixed() + tf.n_random());
    T.leftCols(tf.n_fixed()) = tf.T_zero;
    T.rightCols(tf.n_random()) = tf.T_plus;
    return T;
}

}  // namespace

TEST_CASE("marginal_evd: null-space dimension and content") {
    BasisSpec spec{0.0, 1.0, 4, 1, 2};
    const MarginalEVD evd = marginal_evd(spec);
    REQUIRE(evd.U_zero.cols() == 2);
    REQUIRE(evd.U_plus.cols() == 2);

    // The null space holds constants and linear ramps.
    Vector ones = Vector::Ones(4);
    Vector ramp(4);
    ramp << 0, 1, 2, 3;
    const Matrix P0 = evd.U_zero * evd.U_zero.transpose();
    CHECK((P0 * ones - ones).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((P0 * ramp - ramp).cwiseAbs().maxCoeff() < 1e-10);

    const Matrix D = diff_matrix(4, 2);
    CHECK(((D.transpose() * D) * evd.U_zero).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("marginal_evd: eigenvalues match an independent eigensolver") {
    BasisSpec spec{0.0, 1.0, 6, 1, 2};
    const MarginalEVD evd = marginal_evd(spec);
    const Matrix D = diff_matrix(6, 2);
    const Vector all = jacobi_eigenvalues(D.transpose() * D);
    REQUIRE(evd.Sigma_plus.size() == 4);
    for (Index i = 0; i < 4; ++i)
        CHECK(std::abs(evd.Sigma_plus[i] - all[i + 2]) < 1e-9);
}

TEST_CASE("marginal_evd: deterministic sign pinning") {
    BasisSpec spec{0.0, 1.0, 7, 2, 2};
    const MarginalEVD a = marginal_evd(spec);
    const MarginalEVD b = marginal_evd(spec);
    CHECK(a.U_plus == b.U_plus);
    CHECK(a.U_zero == b.U_zero);
    for (Index j = 0; j < a.U_plus.cols(); ++j) {
        Index i = 0;
        while (std::abs(a.U_plus(i, j)) <= 1e-10 * a.U_plus.col(j).cwiseAbs().maxCoeff()) ++i;
        CHECK(a.U_plus(i, j) > 0.0);
    }
}

TEST_CASE("build_transforms: 2-D column accounting and orthonormality") {
    std::vector<MarginalEVD> evds = {marginal_evd(BasisSpec{0.0, 1.0, 4, 1, 2}),
                                     marginal_evd(BasisSpec{0.0, 1.0, 3, 1, 1})};
    const Transforms tf = build_transforms(evds);
    CHECK(tf.n_fixed() == 2);
    CHECK(tf.n_random() == 10);
    const Matrix T = concat_T(tf);
    CHECK((T.transpose() * T - Matrix::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-10);

    // Block layout: [U20 x U1+ | U2+ x U10 | U2+ x U1+].
    REQUIRE(tf.blocks.size() == 3);
    CHECK(tf.blocks[0].mask == std::vector<bool>{true, false});
    CHECK(tf.blocks[0].width == 2);
    CHECK(tf.blocks[1].mask == std::vector<bool>{false, true});
    CHECK(tf.blocks[1].width == 4);
    CHECK(tf.blocks[2].mask == std::vector<bool>{true, true});
    CHECK(tf.blocks[2].width == 4);
}

TEST_CASE("build_transforms: 3-D block widths sum to the random dimension") {
    std::vector<MarginalEVD> evds = {marginal_evd(BasisSpec{0.0, 1.0, 4, 1, 2}),
                                     marginal_evd(BasisSpec{0.0, 1.0, 3, 1, 1}),
                                     marginal_evd(BasisSpec{0.0, 1.0, 3, 1, 1})};
    const Transforms tf = build_transforms(evds);
    CHECK(tf.n_fixed() == 2);  // q1 q2 q3
    CHECK(tf.n_random() == 34);
    REQUIRE(tf.blocks.size() == 7);
    Index total = 0;
    for (const auto& blk : tf.blocks) total += blk.width;
    CHECK(total == 34);
    const Matrix T = concat_T(tf);
    CHECK((T.transpose() * T - Matrix::Identity(36, 36)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("build_design: reconstruction and polynomial span") {
    Philox rng(31);
    std::vector<BasisSpec> specs = {BasisSpec{0.0, 1.0, 6, 3, 2}, BasisSpec{0.0, 1.0, 5, 3, 2}};
    std::vector<MarginalEVD> evds = {marginal_evd(specs[0]), marginal_evd(specs[1])};
    const Transforms tf = build_transforms(evds);

    const Vector x1 = random_vector(rng, 40, 0.0, 1.0);
    const Vector x2 = random_vector(rng, 40, 0.0, 1.0);
    std::vector<Matrix> margins = {eval_basis(x1, specs[0]), eval_basis(x2, specs[1])};
    auto [X, Z] = build_design(margins, tf);
    const Matrix B = box_product(margins[1], margins[0]);

    // Orthonormal completeness: X T0' theta + Z T+' theta = B theta.
    for (int trial = 0; trial < 5; ++trial) {
        const Vector theta = random_vector(rng, 30);
        const Vector lhs = X * (tf.T_zero.transpose() * theta) +
                           Z * (tf.T_plus.transpose() * theta);
        CHECK((lhs - B * theta).cwiseAbs().maxCoeff() < 1e-10);
    }

    // Blockwise construction equals the naive product.
    CHECK((X - B * tf.T_zero).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((Z - B * tf.T_plus).cwiseAbs().maxCoeff() < 1e-10);

    // With q = (2,2) the fixed part spans {1, x1, x2, x1 x2}.
    Eigen::ColPivHouseholderQR<Matrix> qr(X);
    for (const Vector& poly :
         {Vector(Vector::Ones(40)), x1, x2, Vector(x1.cwiseProduct(x2))}) {
        const Vector coef = qr.solve(poly);
        CHECK((X * coef - poly).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("build_G_components: fixed part unpenalized, quadratic form transfer") {
    Philox rng(32);
    AdaptivePenaltySpec spec;
    spec.dims = {BasisSpec{0.0, 1.0, 6, 3, 2}, BasisSpec{0.0, 1.0, 5, 3, 1}};
    spec.modes = {AdaptivityMode::Full, AdaptivityMode::None};
    spec.p = {{2, 2, 2}, {1, 1, 1}};
    spec.psi_degree = 1;
    const auto comps = adaptive_components_2d(spec);
    std::vector<MarginalEVD> evds = {marginal_evd(spec.dims[0]), marginal_evd(spec.dims[1])};
    const Transforms tf = build_transforms(evds);
    const auto G = build_G_components(tf.T_plus, comps);

    for (const auto& c : comps) {
        CHECK((tf.T_zero.transpose() * c.matrix * tf.T_zero).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((tf.T_zero.transpose() * c.matrix * tf.T_plus).cwiseAbs().maxCoeff() < 1e-10);
    }
    for (const auto& g : G) CHECK(min_eigenvalue(g) > -1e-10);

    // theta' P theta = alpha' (T+' P T+) alpha for theta = T+ alpha.
    for (int trial = 0; trial < 5; ++trial) {
        const Vector alpha = random_vector(rng, tf.n_random());
        const Vector theta = tf.T_plus * alpha;
        for (size_t l = 0; l < comps.size(); ++l) {
            const double direct = theta.dot(comps[l].matrix * theta);
            const double transferred = alpha.dot(G[l] * alpha);
            CHECK(direct == doctest::Approx(transferred).epsilon(1e-10));
        }
    }
}

TEST_CASE("build_G_components: size follows the T_plus construction") {
    AdaptivePenaltySpec spec;
    spec.dims = {BasisSpec{0.0, 1.0, 12, 3, 2}, BasisSpec{0.0, 1.0, 12, 3, 2}};
    spec.modes = {AdaptivityMode::None, AdaptivityMode::None};
    spec.p = {{1, 1, 1}, {1, 1, 1}};
    const auto comps = adaptive_components_2d(spec);
    std::vector<MarginalEVD> evds = {marginal_evd(spec.dims[0]), marginal_evd(spec.dims[1])};
    const Transforms tf = build_transforms(evds);
    const auto G = build_G_components(tf.T_plus, comps);
    REQUIRE(!G.empty());
    CHECK(G[0].rows() == 140);  // d1 d2 - q1 q2
    CHECK(G[0].cols() == 140);
}

TEST_CASE("precision factors agree with the dense construction") {
    Philox rng(33);
    for (int K = 1; K <= 3; ++K) {
        AdaptivePenaltySpec spec;
        spec.psi_degree = 1;
        for (int k = 0; k < K; ++k) {
            spec.dims.push_back(BasisSpec{0.0, 1.0, 5 - (k == 2 ? 1 : 0), 2, k == 0 ? 2 : 1});
            spec.modes.push_back(k == 1 ? AdaptivityMode::VaryAlongSelf : AdaptivityMode::Full);
            spec.p.push_back({2, 2, 2});
        }
        const auto comps = adaptive_components(spec);
        std::vector<MarginalEVD> evds;
        for (const auto& b : spec.dims) evds.push_back(marginal_evd(b));
        const Transforms tf = build_transforms(evds);
        const auto dense_list = build_G_components(tf.T_plus, comps);
        std::vector<ComponentTag> tags;
        for (const auto& c : comps) tags.push_back({c.dimension_tag, c.index});
        const PrecisionModel dense = PrecisionModel::from_dense(dense_list, tags);
        const PrecisionModel factored = build_precision_factors(spec, tf);

        REQUIRE(dense.n_components() == factored.n_components());
        for (Index l = 0; l < dense.n_components(); ++l) {
            CHECK(dense.tag(l).dimension == factored.tag(l).dimension);
            CHECK(dense.tag(l).index == factored.tag(l).index);
            CHECK((dense.dense_component(l) - factored.dense_component(l))
                      .cwiseAbs()
                      .maxCoeff() < 1e-10);
        }
        const Vector prec_weights =
            random_vector(rng, dense.n_components(), 0.1, 3.0);
        CHECK((dense.assemble_precision(prec_weights) -
               factored.assemble_precision(prec_weights))
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
        const Vector alpha = random_vector(rng, tf.n_random());
        CHECK((dense.quad_forms(alpha) - factored.quad_forms(alpha)).cwiseAbs().maxCoeff() <
              1e-10);
        Matrix M = random_matrix(rng, tf.n_random(), tf.n_random());
        M = Matrix(0.5 * (M + M.transpose()));
        CHECK((dense.trace_products(M) - factored.trace_products(M)).cwiseAbs().maxCoeff() <
              1e-10);
    }
}
