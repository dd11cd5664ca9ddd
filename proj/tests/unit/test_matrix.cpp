#include <doctest.h>

#include "beamlu/dense_solve.hpp"
#include "beamlu/errors.hpp"
#include "beamlu/matrix.hpp"
#include "beamlu/norms.hpp"
#include "oracles.hpp"

using namespace beamlu;

TEST_CASE("matmul with identity is a no-op") {
    const Matrix a = oracles::random_matrix(5, 3, 11);
    CHECK(matmul(Matrix::identity(5), a) == a);
    CHECK(matmul(a, Matrix::identity(3)) == a);
}

TEST_CASE("matmul shape mismatch throws") {
    CHECK_THROWS_AS(matmul(Matrix(2, 3), Matrix(2, 3)), std::invalid_argument);
}

TEST_CASE("transpose and submatrix round out") {
    const Matrix a = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}});
    CHECK(transpose(transpose(a)) == a);
    const Matrix s = submatrix(a, 0, 2, 1, 3);
    CHECK(s(0, 0) == 2);
    CHECK(s(1, 1) == 6);
}

TEST_CASE("solve_dense_lu: diagonal example") {
    const Matrix a = Matrix::from_rows({{2, 0}, {0, 4}});
    const std::vector<double> x = solve_dense_lu(a, std::vector<double>{1, 1});
    CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("solve_dense_lu: random 8x8 solve-then-multiply residual") {
    const Matrix a = oracles::random_matrix(8, 8, 42);
    const Matrix b = oracles::random_matrix(8, 3, 43);
    const Matrix x = solve_dense_lu(a, b);
    const double resid = norm(matsub(matmul(a, x), b), NormKind::frobenius()) /
                         (norm(a, NormKind::frobenius()) * norm(x, NormKind::frobenius()));
    CHECK(resid <= 1e-12);
}

TEST_CASE("solve_dense_lu: singular matrix reports the failing pivot") {
    Matrix a(3, 3);
    a(0, 0) = 1.0;
    a(0, 1) = 2.0;
    a(1, 0) = 2.0;
    a(1, 1) = 4.0; // rows 0 and 1 proportional, column 2 all zero
    try {
        solve_dense_lu(a, std::vector<double>{1, 1, 1});
        FAIL("expected numerical_error");
    } catch (const numerical_error& e) {
        CHECK(e.index() < 3);
    }
}

TEST_CASE("vector helpers") {
    const std::vector<double> v{3, 4};
    CHECK(vec_norm2(v) == doctest::Approx(5.0));
    CHECK(vecadd(v, v)[1] == 8);
    CHECK(vecsub(v, v)[0] == 0);
    const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
    const std::vector<double> y = matvec(a, v);
    CHECK(y[0] == 11);
    CHECK(y[1] == 25);
}

TEST_CASE("all_finite flags overflow") {
    Matrix a(2, 2, 1.0);
    CHECK(a.all_finite());
    a(1, 1) = std::numeric_limits<double>::infinity();
    CHECK_FALSE(a.all_finite());
}
