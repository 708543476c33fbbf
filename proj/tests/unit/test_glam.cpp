#include "adaptps/glam.hpp"

#include "adaptps/basis.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

using namespace adaptps;
using namespace adaptps::testing;

namespace {

// Naive tensor design over the grid nodes (first axis fastest).
Matrix naive_grid_design(const std::vector<Matrix>& margins) {
    const int K = static_cast<int>(margins.size());
    Matrix B = margins[K - 1];
    for (int m = K - 2; m >= 0; --m) B = kron(B, margins[m]);
    return B;
}

}  // namespace

TEST_CASE("rh_transform: identity rotates axes once") {
    Philox rng(3);
    GridArray A = GridArray::from_vec(random_vector(rng, 24), {2, 3, 4});
    const GridArray R = rh_transform(Matrix::Identity(2, 2), A);
    REQUIRE(R.dims == std::vector<Index>{3, 4, 2});
    for (Index i = 0; i < 2; ++i)
        for (Index j = 0; j < 3; ++j)
            for (Index k = 0; k < 4; ++k) CHECK(R.at(j, k, i) == A.at(i, j, k));
}

TEST_CASE("rh_transform: two applications equal the Kronecker product") {
    Philox rng(4);
    const Matrix M1 = random_matrix(rng, 4, 3);
    const Matrix M2 = random_matrix(rng, 2, 5);
    GridArray A = GridArray::from_vec(random_vector(rng, 15), {3, 5});
    const GridArray R = rh_transform(M2, rh_transform(M1, A));
    const Vector expected = kron(M2, M1) * A.values;
    REQUIRE(R.dims == std::vector<Index>{4, 2});
    CHECK((R.values - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("rh_transform: one dimension degenerates to matrix-vector product") {
    Philox rng(5);
    const Matrix M = random_matrix(rng, 4, 6);
    GridArray A = GridArray::from_vec(random_vector(rng, 6), {6});
    const GridArray R = rh_transform(M, A);
    CHECK((R.values - M * A.values).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("rh_transform: K identity applications are the identity") {
    Philox rng(6);
    GridArray A = GridArray::from_vec(random_vector(rng, 30), {5, 3, 2});
    GridArray R = A;
    R = rh_transform(Matrix::Identity(5, 5), R);
    R = rh_transform(Matrix::Identity(3, 3), R);
    R = rh_transform(Matrix::Identity(2, 2), R);
    REQUIRE(R.dims == A.dims);
    CHECK((R.values - A.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("glam_fitted: constant coefficients with partition-of-unity bases") {
    BasisSpec s1{0.0, 1.0, 5, 3, 2};
    BasisSpec s2{0.0, 1.0, 4, 2, 1};
    Vector g1(4), g2(3);
    g1 << 0.1, 0.3, 0.6, 0.9;
    g2 << 0.2, 0.5, 0.8;
    const std::vector<Matrix> margins = {eval_basis(g1, s1), eval_basis(g2, s2)};
    GridArray theta = GridArray::from_vec(Vector::Constant(s1.d * s2.d, 2.5), {s1.d, s2.d});
    const GridArray fitted = glam_fitted(margins, theta);
    for (Index i = 0; i < fitted.size(); ++i)
        CHECK(fitted.values[i] == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("glam_fitted: equals the naive tensor design on a 4x3x3 grid") {
    Philox rng(7);
    const std::vector<Matrix> margins = {random_matrix(rng, 4, 3), random_matrix(rng, 3, 2),
                                         random_matrix(rng, 3, 4)};
    const Vector theta = random_vector(rng, 3 * 2 * 4);
    const GridArray fitted = glam_fitted(margins, GridArray::from_vec(theta, {3, 2, 4}));
    const Vector expected = naive_grid_design(margins) * theta;
    REQUIRE(fitted.dims == std::vector<Index>{4, 3, 3});
    CHECK((fitted.values - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("glam_fitted: single grid point is the scalar tensor evaluation") {
    Philox rng(8);
    const std::vector<Matrix> margins = {random_matrix(rng, 1, 3), random_matrix(rng, 1, 2)};
    const Vector theta = random_vector(rng, 6);
    const GridArray fitted = glam_fitted(margins, GridArray::from_vec(theta, {3, 2}));
    REQUIRE(fitted.size() == 1);
    double direct = 0.0;
    for (Index j = 0; j < 3; ++j)
        for (Index k = 0; k < 2; ++k) direct += theta[k * 3 + j] * margins[0](0, j) * margins[1](0, k);
    CHECK(fitted.values[0] == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("glam_weighted_inner: separable unit weights factorise") {
    // Orthonormal marginal columns give the identity Gram matrix.
    Philox rng(9);
    auto orthonormal = [&](Index rows, Index cols) {
        const Matrix M = random_matrix(rng, rows, cols);
        Eigen::HouseholderQR<Matrix> qr(M);
        return Matrix(qr.householderQ() * Matrix::Identity(rows, cols));
    };
    const std::vector<Matrix> margins = {orthonormal(6, 3), orthonormal(5, 2)};
    const GridArray W = GridArray::from_vec(Vector::Ones(30), {6, 5});
    const Matrix G = glam_weighted_inner(margins, W);
    CHECK((G - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("glam_weighted_inner: equals the naive weighted Gram matrix") {
    Philox rng(10);
    SUBCASE("two dimensions") {
        const std::vector<Matrix> margins = {random_matrix(rng, 4, 3), random_matrix(rng, 3, 2)};
        const Vector w = random_vector(rng, 12, 0.0, 2.0);
        const Matrix G = glam_weighted_inner(margins, GridArray::from_vec(w, {4, 3}));
        const Matrix B = naive_grid_design(margins);
        const Matrix expected = B.transpose() * w.asDiagonal() * B;
        CHECK((G - expected).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("three dimensions") {
        const std::vector<Matrix> margins = {random_matrix(rng, 4, 3), random_matrix(rng, 3, 2),
                                             random_matrix(rng, 3, 3)};
        const Vector w = random_vector(rng, 36, 0.0, 2.0);
        const Matrix G = glam_weighted_inner(margins, GridArray::from_vec(w, {4, 3, 3}));
        const Matrix B = naive_grid_design(margins);
        const Matrix expected = B.transpose() * w.asDiagonal() * B;
        CHECK((G - expected).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("glam_weighted_inner: zero weights give the zero matrix") {
    Philox rng(12);
    const std::vector<Matrix> margins = {random_matrix(rng, 4, 3), random_matrix(rng, 3, 2)};
    const Matrix G = glam_weighted_inner(margins, GridArray::zeros({4, 3}));
    CHECK(G.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("glam_weighted_rhs: equals the naive weighted right-hand side") {
    Philox rng(13);
    const std::vector<Matrix> margins = {random_matrix(rng, 4, 3), random_matrix(rng, 3, 2)};
    const Vector v = random_vector(rng, 12);
    const Vector r = glam_weighted_rhs(margins, GridArray::from_vec(v, {4, 3}));
    const Matrix B = naive_grid_design(margins);
    CHECK((r - B.transpose() * v).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("glam: dimension mismatches are rejected") {
    Philox rng(14);
    const Matrix M = random_matrix(rng, 3, 4);
    GridArray A = GridArray::from_vec(random_vector(rng, 6), {3, 2});
    CHECK_THROWS_AS(rh_transform(M, A), std::invalid_argument);
    CHECK_THROWS_AS(glam_weighted_inner({M}, A), std::invalid_argument);
}
