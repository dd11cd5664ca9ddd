#include "beamlu/gallery.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "beamlu/dense_solve.hpp"
#include "beamlu/errors.hpp"
#include "beamlu/norms.hpp"
#include "beamlu/prng.hpp"
#include "beamlu/svd.hpp"

namespace beamlu {

double SplitMix64::normal() {
    // Box-Muller; u1 nudged away from zero so log stays finite.
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1 + 0x1.0p-60));
    return r * std::cos(6.283185307179586476925286766559 * u2);
}

const char* to_string(MatrixFamily f) {
    switch (f) {
        case MatrixFamily::zielke: return "zielke";
        case MatrixFamily::turing_t: return "turing_t";
        case MatrixFamily::tridiag_ttt: return "tridiag_ttt";
        case MatrixFamily::diagdom_rows: return "diagdom_rows";
        case MatrixFamily::diagdom_cols: return "diagdom_cols";
        case MatrixFamily::diagdom_both: return "diagdom_both";
        case MatrixFamily::block_diagdom_cols: return "block_diagdom_cols";
        case MatrixFamily::spd: return "spd";
        case MatrixFamily::inverse_block_diagdom_rows: return "inverse_block_diagdom_rows";
        case MatrixFamily::random_cond: return "random_cond";
        case MatrixFamily::leading_swap: return "leading_swap";
    }
    return "?";
}

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

MatrixSpec base(MatrixFamily f, std::size_t n) {
    require(n >= 2, "matrix spec: n must be at least 2");
    MatrixSpec s;
    s.family = f;
    s.n = n;
    return s;
}

} // namespace

MatrixSpec MatrixSpec::zielke(std::size_t n) { return base(MatrixFamily::zielke, n); }
MatrixSpec MatrixSpec::turing_t(std::size_t n) { return base(MatrixFamily::turing_t, n); }
MatrixSpec MatrixSpec::tridiag_ttt(std::size_t n) { return base(MatrixFamily::tridiag_ttt, n); }

MatrixSpec MatrixSpec::diagdom_rows(std::size_t n, double delta, std::uint64_t seed) {
    require(delta > 0.0, "matrix spec: delta must be positive");
    MatrixSpec s = base(MatrixFamily::diagdom_rows, n);
    s.delta = delta;
    s.seed = seed;
    return s;
}

MatrixSpec MatrixSpec::diagdom_cols(std::size_t n, double delta, std::uint64_t seed) {
    MatrixSpec s = diagdom_rows(n, delta, seed);
    s.family = MatrixFamily::diagdom_cols;
    return s;
}

MatrixSpec MatrixSpec::diagdom_both(std::size_t n, double delta, std::uint64_t seed) {
    MatrixSpec s = diagdom_rows(n, delta, seed);
    s.family = MatrixFamily::diagdom_both;
    return s;
}

MatrixSpec MatrixSpec::block_diagdom_cols(std::size_t n, BlockingScheme blocking, double delta,
                                          std::uint64_t seed) {
    require(delta > 0.0, "matrix spec: delta must be positive");
    require(blocking.dim() == n, "matrix spec: blocking dimension mismatch");
    MatrixSpec s = base(MatrixFamily::block_diagdom_cols, n);
    s.delta = delta;
    s.seed = seed;
    s.blocking = std::move(blocking);
    return s;
}

MatrixSpec MatrixSpec::spd(std::size_t n, double cond_target, std::uint64_t seed) {
    require(cond_target >= 1.0, "matrix spec: cond_target must be at least 1");
    require(cond_target > 1.0 || n == 1, "matrix spec: cond_target 1 with n > 1 is infeasible");
    MatrixSpec s = base(MatrixFamily::spd, n);
    s.cond_target = cond_target;
    s.seed = seed;
    return s;
}

MatrixSpec MatrixSpec::inverse_block_diagdom_rows(std::size_t n, BlockingScheme blocking,
                                                  double delta, std::uint64_t seed) {
    MatrixSpec s = block_diagdom_cols(n, std::move(blocking), delta, seed);
    s.family = MatrixFamily::inverse_block_diagdom_rows;
    return s;
}

MatrixSpec MatrixSpec::random_cond(std::size_t n, double cond_target, std::uint64_t seed) {
    MatrixSpec s = spd(n, cond_target, seed);
    s.family = MatrixFamily::random_cond;
    return s;
}

MatrixSpec MatrixSpec::leading_swap(std::size_t n) { return base(MatrixFamily::leading_swap, n); }

std::string MatrixSpec::to_string() const {
    std::ostringstream os;
    os << beamlu::to_string(family) << "(n=" << n;
    if (delta > 0.0) os << ",delta=" << delta;
    if (cond_target > 0.0) os << ",cond=" << cond_target;
    if (family != MatrixFamily::zielke && family != MatrixFamily::turing_t &&
        family != MatrixFamily::tridiag_ttt && family != MatrixFamily::leading_swap)
        os << ",seed=" << seed;
    if (blocking) os << ",blocking=" << blocking->to_string();
    os << ")";
    return os.str();
}

Matrix random_orthogonal(std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.normal();
    QrResult qr = householder_qr(g);
    // fix signs so the factorization is unique (R diagonal positive)
    Matrix q = qr.Q;
    for (std::size_t j = 0; j < n; ++j) {
        if (qr.R(j, j) < 0.0)
            for (std::size_t i = 0; i < n; ++i) q(i, j) = -q(i, j);
    }
    return q;
}

namespace {

Matrix gen_zielke(std::size_t n) {
    Matrix a(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a(i, j) = 1.0;
    a(n - 1, 0) = -1.0;
    return a;
}

Matrix gen_turing(std::size_t n) {
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = 1.0;
        for (std::size_t j = 0; j < i; ++j) a(i, j) = -1.0;
    }
    return a;
}

// T^{-T} T^{-1} for the all-ones upper-triangular T: tridiagonal with 2 on
// the diagonal and -1 off it, except the (0,0) entry is 1. Its smallest
// eigenvalue is 4 sin^2(pi / (4n + 2)) exactly.
Matrix gen_tridiag_ttt(std::size_t n) {
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = (i == 0) ? 1.0 : 2.0;
        if (i + 1 < n) {
            a(i, i + 1) = -1.0;
            a(i + 1, i) = -1.0;
        }
    }
    return a;
}

// Two ulps of headroom so the margin recomputed from the stored entries
// still comes out at least delta.
double bump_up(double x) {
    const double inf = std::numeric_limits<double>::infinity();
    return std::nextafter(std::nextafter(x, inf), inf);
}

Matrix gen_diagdom(const MatrixSpec& spec) {
    const std::size_t n = spec.n;
    SplitMix64 rng(spec.seed);
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) a(i, j) = rng.symmetric();
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0, col = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            row += std::fabs(a(i, j));
            col += std::fabs(a(j, i));
        }
        switch (spec.family) {
            case MatrixFamily::diagdom_rows: a(i, i) = bump_up(row + spec.delta); break;
            case MatrixFamily::diagdom_cols: a(i, i) = bump_up(col + spec.delta); break;
            default: a(i, i) = bump_up(std::max(row, col) + spec.delta); break;
        }
    }
    return a;
}

// Diagonal blocks are scaled random orthogonal matrices sized so the defining
// margin ||(A_jj)^{-1}||^{-1} - sum of off-diagonal norms equals delta, with a
// hair of headroom for the predicate's own roundoff.
Matrix gen_block_diagdom(const MatrixSpec& spec, bool by_rows) {
    const std::size_t n = spec.n;
    const BlockingScheme& bl = *spec.blocking;
    SplitMix64 rng(spec.seed ^ 0x5bd1e995u);
    Matrix a(n, n);
    for (std::size_t bi = 0; bi < bl.num_blocks(); ++bi)
        for (std::size_t bj = 0; bj < bl.num_blocks(); ++bj) {
            if (bi == bj) continue;
            for (std::size_t i = bl.offset(bi); i < bl.offset(bi) + bl.block_size(bi); ++i)
                for (std::size_t j = bl.offset(bj); j < bl.offset(bj) + bl.block_size(bj); ++j)
                    a(i, j) = rng.symmetric();
        }
    const NormKind inner = by_rows ? NormKind::inf() : NormKind::one();
    for (std::size_t bj = 0; bj < bl.num_blocks(); ++bj) {
        double offsum = 0.0;
        for (std::size_t bi = 0; bi < bl.num_blocks(); ++bi) {
            if (bi == bj) continue;
            const std::size_t r0 = by_rows ? bl.offset(bj) : bl.offset(bi);
            const std::size_t c0 = by_rows ? bl.offset(bi) : bl.offset(bj);
            const std::size_t rs = by_rows ? bl.block_size(bj) : bl.block_size(bi);
            const std::size_t cs = by_rows ? bl.block_size(bi) : bl.block_size(bj);
            offsum += norm(submatrix(a, r0, r0 + rs, c0, c0 + cs), inner);
        }
        const std::size_t bs = bl.block_size(bj);
        const Matrix q = random_orthogonal(bs, spec.seed * 1315423911ULL + bj + 1);
        const double qinv = norm(transpose(q), inner); // ||Q^{-1}|| = ||Q^T||
        const double c = (offsum + spec.delta) * qinv * (1.0 + 1e-12);
        place(a, bl.offset(bj), bl.offset(bj), scale(q, c));
    }
    return a;
}

Matrix gen_spd(const MatrixSpec& spec) {
    const std::size_t n = spec.n;
    const Matrix q = random_orthogonal(n, spec.seed ^ 0x9e3779b9u);
    std::vector<double> lam(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        lam[i] = std::pow(spec.cond_target, -t); // log-spaced in [1/cond, 1]
    }
    Matrix a = matmul(q, matmul(Matrix::diagonal(lam), transpose(q)));
    // exact symmetry
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = v;
            a(j, i) = v;
        }
    return a;
}

Matrix gen_random_cond(const MatrixSpec& spec) {
    const std::size_t n = spec.n;
    const Matrix u = random_orthogonal(n, spec.seed ^ 0x85ebca6bu);
    const Matrix v = random_orthogonal(n, spec.seed ^ 0xc2b2ae35u);
    std::vector<double> sig(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        sig[i] = std::pow(spec.cond_target, -t);
    }
    return matmul(u, matmul(Matrix::diagonal(sig), transpose(v)));
}

Matrix gen_inverse_block_diagdom_rows(const MatrixSpec& spec) {
    const Matrix b = gen_block_diagdom(spec, /*by_rows=*/true);
    const Matrix a = inverse(b);
    const Matrix resid = matsub(matmul(a, b), Matrix::identity(spec.n));
    if (norm(resid, NormKind::max()) > 1e-10)
        throw numerical_error("inverse_block_diagdom_rows: inversion residual too large", 0);
    return a;
}

Matrix gen_leading_swap(std::size_t n) {
    Matrix a = Matrix::identity(n);
    a(0, 0) = 0.0;
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    a(1, 1) = 0.0;
    return a;
}

} // namespace

Matrix generate(const MatrixSpec& spec) {
    switch (spec.family) {
        case MatrixFamily::zielke: return gen_zielke(spec.n);
        case MatrixFamily::turing_t: return gen_turing(spec.n);
        case MatrixFamily::tridiag_ttt: return gen_tridiag_ttt(spec.n);
        case MatrixFamily::diagdom_rows:
        case MatrixFamily::diagdom_cols:
        case MatrixFamily::diagdom_both: return gen_diagdom(spec);
        case MatrixFamily::block_diagdom_cols: return gen_block_diagdom(spec, false);
        case MatrixFamily::spd: return gen_spd(spec);
        case MatrixFamily::inverse_block_diagdom_rows:
            return gen_inverse_block_diagdom_rows(spec);
        case MatrixFamily::random_cond: return gen_random_cond(spec);
        case MatrixFamily::leading_swap: return gen_leading_swap(spec.n);
    }
    throw std::invalid_argument("generate: unknown family");
}

} // namespace beamlu
