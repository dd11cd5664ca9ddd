#include <doctest.h>

#include <cmath>

#include "beamlu/errors.hpp"
#include "beamlu/gallery.hpp"
#include "beamlu/norms.hpp"
#include "beamlu/svd.hpp"
#include "oracles.hpp"

using namespace beamlu;

namespace {
constexpr double kU = 0x1.0p-53;

void check_svd_contract(const Matrix& a, const SvdResult& s) {
    const std::size_t n = a.rows();
    const double bound = 64.0 * kU * static_cast<double>(n);
    CHECK(norm(matsub(matmul(transpose(s.U), s.U), Matrix::identity(s.U.cols())),
               NormKind::max()) <= bound);
    CHECK(norm(matsub(matmul(s.Vt, transpose(s.Vt)), Matrix::identity(s.Vt.rows())),
               NormKind::max()) <= bound);
    const Matrix rec = matmul(s.U, matmul(Matrix::diagonal(s.sigma), s.Vt));
    CHECK(norm(matsub(rec, a), NormKind::frobenius()) <=
          bound * std::max(norm(a, NormKind::frobenius()), kU));
    for (std::size_t i = 0; i + 1 < s.sigma.size(); ++i) CHECK(s.sigma[i] >= s.sigma[i + 1]);
    for (double v : s.sigma) CHECK(v >= 0.0);
}
} // namespace

TEST_CASE("svd_small trivial cases") {
    SUBCASE("identity") {
        const SvdResult s = svd_small(Matrix::identity(2));
        CHECK(s.sigma[0] == 1.0);
        CHECK(s.sigma[1] == 1.0);
    }
    SUBCASE("diag(3,1)") {
        const SvdResult s = svd_small(Matrix::from_rows({{3, 0}, {0, 1}}));
        CHECK(s.sigma[0] == doctest::Approx(3.0).epsilon(1e-15));
        CHECK(s.sigma[1] == doctest::Approx(1.0).epsilon(1e-15));
        // U and V equal identity up to sign
        CHECK(std::fabs(s.U(0, 0)) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::fabs(s.Vt(0, 0)) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("permutation has unit singular values") {
        const SvdResult s = svd_small(Matrix::from_rows({{0, 1}, {1, 0}}));
        CHECK(s.sigma[0] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(s.sigma[1] == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("svd_small validation") {
    CHECK_THROWS_AS(svd_small(Matrix(2, 3)), std::invalid_argument);
    CHECK_THROWS_AS(svd_small(oracles::random_matrix(65, 65, 1)), std::invalid_argument);
    CHECK_NOTHROW(svd_small(oracles::random_matrix(65, 65, 1), 128));
}

TEST_CASE("svd contract on random matrices") {
    for (std::uint64_t trial = 0; trial < 25; ++trial) {
        const std::size_t n = 1 + trial % 12;
        const Matrix a = oracles::random_matrix(n, n, 100 + trial);
        check_svd_contract(a, svd_small(a));
    }
}

TEST_CASE("svd handles rank deficiency and zero matrices") {
    Matrix a(4, 4);
    a(0, 1) = 2.0; // rank 1
    check_svd_contract(a, svd_small(a));
    const SvdResult z = svd_small(Matrix(3, 3));
    CHECK(z.sigma == std::vector<double>{0.0, 0.0, 0.0});
    check_svd_contract(Matrix(3, 3), z);
}

TEST_CASE("svd of rectangular and QR-preconditioned sizes") {
    const Matrix tall = oracles::random_matrix(9, 4, 55);
    const SvdResult st = svd(tall);
    const Matrix rec = matmul(st.U, matmul(Matrix::diagonal(st.sigma), st.Vt));
    CHECK(norm(matsub(rec, tall), NormKind::frobenius()) <= 1e-13);

    const Matrix wide = oracles::random_matrix(4, 9, 56);
    const SvdResult sw = svd(wide);
    const Matrix recw = matmul(sw.U, matmul(Matrix::diagonal(sw.sigma), sw.Vt));
    CHECK(norm(matsub(recw, wide), NormKind::frobenius()) <= 1e-13);

    const Matrix big = oracles::random_matrix(80, 80, 57);
    const SvdResult sb = svd(big);
    const Matrix recb = matmul(sb.U, matmul(Matrix::diagonal(sb.sigma), sb.Vt));
    CHECK(norm(matsub(recb, big), NormKind::frobenius()) /
              norm(big, NormKind::frobenius()) <=
          64.0 * kU * 80.0);
}

TEST_CASE("sigma_min / sigma_max / cond2 basics") {
    CHECK(sigma_min(Matrix::identity(5)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sigma_max(Matrix::identity(5)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cond2(Matrix::identity(5)) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::isinf(cond2(Matrix(3, 3))));
}

TEST_CASE("Turing triangular matrix: inverse norms pin sigma_min") {
    // max|T^{-1}| = 2^{n-2} and ||T^{-1}||_inf = 2^{n-1} exactly, so
    // sigma_min <= 1/max|T^{-1}| = 2^{2-n}.
    const std::size_t n = 10;
    const Matrix t = generate(MatrixSpec::turing_t(n));
    const double smin = sigma_min(t);
    CHECK(smin <= std::pow(2.0, 2.0 - static_cast<double>(n)));
    CHECK(smin > 0.0);
}

TEST_CASE("Zielke matrix singular values at n=64") {
    const Matrix z = generate(MatrixSpec::zielke(64));
    const SvdResult s = svd(z);
    const double two_n_over_pi = 2.0 * 64.0 / 3.14159265358979323846;
    CHECK(s.sigma.back() >= 0.45);
    CHECK(s.sigma.back() <= 0.55);
    CHECK(s.sigma.front() >= 0.95 * two_n_over_pi);
    CHECK(s.sigma.front() <= 1.05 * two_n_over_pi);
}

TEST_CASE("symmetric eigenvalues match the tridiagonal formula") {
    const std::size_t n = 16;
    const Matrix m = generate(MatrixSpec::tridiag_ttt(n));
    const std::vector<double> ev = symmetric_eigenvalues(m);
    const double expect = 4.0 * std::pow(std::sin(3.14159265358979323846 / (4.0 * n + 2.0)), 2);
    CHECK(oracles::rel_diff(ev.back(), expect) <= 1e-10);
}

TEST_CASE("non-finite input exhausts the sweep limit and reports it") {
    Matrix a(3, 3, 1.0);
    a(1, 1) = std::numeric_limits<double>::quiet_NaN();
    try {
        svd_small(a);
        FAIL("expected numerical_error");
    } catch (const numerical_error& e) {
        CHECK(e.index() == kJacobiSweepLimit);
    }
}

TEST_CASE("householder_qr reproduces the input") {
    const Matrix a = oracles::random_matrix(10, 6, 77);
    const QrResult qr = householder_qr(a);
    CHECK(norm(matsub(matmul(qr.Q, qr.R), a), NormKind::frobenius()) <= 1e-13);
    CHECK(norm(matsub(matmul(transpose(qr.Q), qr.Q), Matrix::identity(6)), NormKind::max()) <=
          1e-14);
}
