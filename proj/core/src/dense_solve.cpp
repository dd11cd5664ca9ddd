#include "beamlu/dense_solve.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "beamlu/errors.hpp"

namespace beamlu {

namespace {
constexpr double kUnitRoundoff = 0x1.0p-53;
}

PivotedLU::PivotedLU(const Matrix& a) : lu_(a), perm_(a.rows()) {
    if (!a.is_square()) throw std::invalid_argument("PivotedLU: matrix must be square");
    const std::size_t n = a.rows();
    std::iota(perm_.begin(), perm_.end(), 0);

    double amax = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) amax = std::max(amax, std::fabs(a(i, j)));

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::fabs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::fabs(lu_(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best <= kUnitRoundoff * amax)
            throw numerical_error("dense lu: pivot singular to working precision", k);
        if (piv != k) {
            std::swap(perm_[k], perm_[piv]);
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
        }
        const double d = lu_(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = lu_(i, k) / d;
            lu_(i, k) = l;
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= l * lu_(k, j);
        }
    }
}

std::vector<double> PivotedLU::solve(const std::vector<double>& b) const {
    const std::size_t n = dim();
    if (b.size() != n) throw std::invalid_argument("PivotedLU::solve: size mismatch");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[perm_[i]];
        for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * y[j];
        y[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = y[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * y[j];
        y[i] = s / lu_(i, i);
    }
    return y;
}

Matrix PivotedLU::solve(const Matrix& b) const {
    const std::size_t n = dim();
    if (b.rows() != n) throw std::invalid_argument("PivotedLU::solve: shape mismatch");
    Matrix x(n, b.cols());
    std::vector<double> col(n);
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = b(i, j);
        std::vector<double> xi = solve(col);
        for (std::size_t i = 0; i < n; ++i) x(i, j) = xi[i];
    }
    return x;
}

Matrix solve_dense_lu(const Matrix& a, const Matrix& b) {
    return PivotedLU(a).solve(b);
}

std::vector<double> solve_dense_lu(const Matrix& a, const std::vector<double>& b) {
    return PivotedLU(a).solve(b);
}

Matrix inverse(const Matrix& a) {
    return PivotedLU(a).solve(Matrix::identity(a.rows()));
}

} // namespace beamlu
