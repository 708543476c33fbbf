#include "adaptps/basis.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

using namespace adaptps;
using namespace adaptps::testing;

TEST_CASE("make_knots: equally spaced with boundary extensions") {
    BasisSpec spec{0.0, 1.0, 5, 3, 2};
    const Vector knots = make_knots(spec);
    REQUIRE(knots.size() == 9);
    for (int i = 0; i < 9; ++i) CHECK(knots[i] == doctest::Approx(-1.5 + 0.5 * i).epsilon(1e-14));

    BasisSpec flat{0.0, 1.0, 4, 0, 1};
    const Vector k0 = make_knots(flat);
    REQUIRE(k0.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(k0[i] == doctest::Approx(0.25 * i).epsilon(1e-14));
}

TEST_CASE("make_knots: non-unit domain spacing") {
    BasisSpec spec{-5.0, 1.5, 12, 3, 2};
    const Vector knots = make_knots(spec);
    const double h = 6.5 / 9.0;
    for (Index i = 1; i < knots.size(); ++i)
        CHECK(knots[i] - knots[i - 1] == doctest::Approx(h).epsilon(1e-12));

    // Partition of unity on a fine grid cross-checks the construction rule.
    Vector x(101);
    for (int i = 0; i <= 100; ++i) x[i] = -5.0 + 6.5 * i / 100.0;
    const Matrix B = eval_basis(x, spec);
    for (Index i = 0; i < B.rows(); ++i)
        CHECK(std::abs(B.row(i).sum() - 1.0) < 1e-12);
}

TEST_CASE("make_knots: rejects d <= degree") {
    BasisSpec bad{0.0, 1.0, 3, 3, 1};
    CHECK_THROWS_AS(make_knots(bad), std::invalid_argument);
}

TEST_CASE("eval_basis: degree-0 indicator") {
    BasisSpec spec{0.0, 1.0, 4, 0, 1};
    Vector x(1);
    x[0] = 0.3;
    const Matrix B = eval_basis(x, spec);
    CHECK(B(0, 0) == 0.0);
    CHECK(B(0, 1) == 1.0);
    CHECK(B(0, 2) == 0.0);
    CHECK(B(0, 3) == 0.0);
}

TEST_CASE("eval_basis: cubic values at a knot") {
    BasisSpec spec{0.0, 1.0, 5, 3, 2};
    Vector x(1);
    x[0] = 0.0;
    const Matrix B = eval_basis(x, spec);
    CHECK(B(0, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(B(0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(B(0, 2) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(B(0, 3) == 0.0);
    CHECK(B(0, 4) == 0.0);
}

TEST_CASE("eval_basis: partition of unity and bandedness") {
    Philox rng(42);
    for (int trial = 0; trial < 5; ++trial) {
        BasisSpec spec;
        spec.x_min = rng.uniform(-3.0, 0.0);
        spec.x_max = spec.x_min + rng.uniform(0.5, 5.0);
        spec.degree = 1 + static_cast<int>(rng.uniform() * 3);
        spec.d = spec.degree + 2 + static_cast<int>(rng.uniform() * 8);
        spec.q = 1;
        const Vector x = random_vector(rng, 40, spec.x_min, spec.x_max);
        const Matrix B = eval_basis(x, spec);
        for (Index i = 0; i < B.rows(); ++i) {
            CHECK(std::abs(B.row(i).sum() - 1.0) < 1e-12);
            Index nonzeros = 0;
            for (Index j = 0; j < B.cols(); ++j)
                if (B(i, j) != 0.0) ++nonzeros;
            CHECK(nonzeros <= spec.degree + 1);
            CHECK(B.row(i).minCoeff() >= 0.0);
        }
    }
}

TEST_CASE("eval_basis: domain boundaries included, outside rejected") {
    BasisSpec spec{0.0, 2.0, 8, 3, 2};
    Vector ok(2);
    ok << 0.0, 2.0;
    const Matrix B = eval_basis(ok, spec);
    CHECK(std::abs(B.row(0).sum() - 1.0) < 1e-12);
    CHECK(std::abs(B.row(1).sum() - 1.0) < 1e-12);
    Vector bad(1);
    bad << 2.0000001;
    CHECK_THROWS_AS(eval_basis(bad, spec), std::invalid_argument);
}

TEST_CASE("diff_matrix: first and second order rows") {
    const Matrix D1 = diff_matrix(4, 1);
    REQUIRE(D1.rows() == 3);
    CHECK(D1.row(0) == Eigen::RowVector4d(-1, 1, 0, 0));
    CHECK(D1.row(1) == Eigen::RowVector4d(0, -1, 1, 0));
    CHECK(D1.row(2) == Eigen::RowVector4d(0, 0, -1, 1));

    const Matrix D2 = diff_matrix(4, 2);
    REQUIRE(D2.rows() == 2);
    CHECK(D2.row(0) == Eigen::RowVector4d(1, -2, 1, 0));
    CHECK(D2.row(1) == Eigen::RowVector4d(0, 1, -2, 1));
}

TEST_CASE("diff_matrix: polynomial annihilation") {
    for (int d : {5, 9}) {
        for (int q : {1, 2, 3}) {
            const Matrix D = diff_matrix(d, q);
            Vector constant = Vector::Ones(d);
            CHECK((D * constant).cwiseAbs().maxCoeff() < 1e-12);
            if (q >= 2) {
                Vector ramp(d);
                for (int i = 0; i < d; ++i) ramp[i] = i;
                CHECK((D * ramp).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
    }
    CHECK_THROWS_AS(diff_matrix(4, 4), std::invalid_argument);
}

TEST_CASE("box_product: definition and column ordering") {
    Matrix A(1, 2), B(1, 2);
    A << 1, 2;
    B << 3, 4;
    const Matrix C = box_product(A, B);
    REQUIRE(C.rows() == 1);
    REQUIRE(C.cols() == 4);
    CHECK(C(0, 0) == 3);
    CHECK(C(0, 1) == 4);
    CHECK(C(0, 2) == 6);
    CHECK(C(0, 3) == 8);

    Matrix mismatched(2, 2);
    CHECK_THROWS_AS(box_product(A, mismatched), std::invalid_argument);
}

TEST_CASE("box_product: identity rows select blocks") {
    Matrix A = Matrix::Zero(2, 3);
    A(0, 1) = 1.0;  // selects the middle block
    A(1, 2) = 2.0;  // scales the last block
    Philox rng(7);
    const Matrix B = random_matrix(rng, 2, 2);
    const Matrix C = box_product(A, B);
    CHECK(C.row(0).segment(2, 2).isApprox(B.row(0)));
    CHECK(C.row(0).segment(0, 2).isZero());
    CHECK(C.row(1).segment(4, 2).isApprox(2.0 * B.row(1)));
}

TEST_CASE("box_product: equals (A kron 1^T) hadamard (1^T kron B)") {
    Philox rng(11);
    const Matrix A = random_matrix(rng, 3, 2);
    const Matrix B = random_matrix(rng, 3, 3);
    const Matrix lhs = box_product(A, B);
    const Matrix expanded_a = kron(A, Matrix::Ones(1, B.cols()));
    const Matrix expanded_b = kron(Matrix::Ones(1, A.cols()), B);
    const Matrix rhs = expanded_a.cwiseProduct(expanded_b);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("box_product ordering matches the coefficient array layout") {
    // B vec(Theta) must equal the pointwise tensor sum with the first
    // dimension fastest in vec().
    Philox rng(13);
    BasisSpec s1{0.0, 1.0, 5, 2, 1};
    BasisSpec s2{0.0, 1.0, 4, 2, 1};
    const Vector x1 = random_vector(rng, 6, 0.0, 1.0);
    const Vector x2 = random_vector(rng, 6, 0.0, 1.0);
    const Matrix B1 = eval_basis(x1, s1);
    const Matrix B2 = eval_basis(x2, s2);
    const Matrix B = box_product(B2, B1);
    const Matrix theta = random_matrix(rng, s1.d, s2.d);
    Vector vec_theta(s1.d * s2.d);
    for (int k = 0; k < s2.d; ++k)
        for (int j = 0; j < s1.d; ++j) vec_theta[k * s1.d + j] = theta(j, k);
    const Vector via_matrix = B * vec_theta;
    for (int i = 0; i < 6; ++i) {
        double direct = 0.0;
        for (int j = 0; j < s1.d; ++j)
            for (int k = 0; k < s2.d; ++k) direct += theta(j, k) * B1(i, j) * B2(i, k);
        CHECK(via_matrix[i] == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("kron: block structure, mixed product, dimensions") {
    Matrix row(1, 2);
    row << 1, -1;
    const Matrix K = kron(Matrix::Identity(2, 2), row);
    REQUIRE(K.rows() == 2);
    REQUIRE(K.cols() == 4);
    CHECK(K(0, 0) == 1);
    CHECK(K(0, 1) == -1);
    CHECK(K(0, 2) == 0);
    CHECK(K(1, 2) == 1);
    CHECK(K(1, 3) == -1);

    Philox rng(5);
    const Matrix A = random_matrix(rng, 2, 3), B = random_matrix(rng, 3, 2);
    const Matrix C = random_matrix(rng, 3, 2), D = random_matrix(rng, 2, 4);
    const Matrix lhs = kron(A, B) * kron(C, D);
    const Matrix rhs = kron(Matrix(A * C), Matrix(B * D));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(kron(A, B).rows() == A.rows() * B.rows());
    CHECK(kron(A, B).cols() == A.cols() * B.cols());
}
