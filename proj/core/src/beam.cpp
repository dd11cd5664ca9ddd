#include "beamlu/beam.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "beamlu/errors.hpp"
#include "beamlu/svd.hpp"

namespace beamlu {

BeamFactorization beam_factor(const Matrix& a, const BlockingScheme& blocking, double tau_hat,
                              bool woodbury, const FactorOptions& opts) {
    if (!(tau_hat > 0.0 && tau_hat < 1.0))
        throw std::invalid_argument("beam_factor: tau_hat must lie in (0, 1)");
    if (!a.is_square() || a.empty())
        throw std::invalid_argument("beam_factor: matrix must be square and non-empty");

    const double a2 = sigma_max(a);
    if (a2 == 0.0) throw std::invalid_argument("beam_factor: zero matrix");
    const double tau = tau_hat * a2;

    detail::ModificationSink sink;
    sink.enabled = true;
    sink.tau = tau;
    BlockLUFactors factors =
        detail::factor_core(a, blocking, DiagFactorizer::unitary, opts, &sink);

    const std::size_t n = a.rows();
    const std::size_t m = sink.count;
    ModificationRecord mods;
    mods.count = m;
    mods.tau = tau;
    mods.tau_hat = tau_hat;
    mods.block_of = std::move(sink.block_of);
    mods.sigma_deltas = std::move(sink.deltas);
    mods.u_cols = Matrix(n, m);
    mods.v_cols = Matrix(n, m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            mods.u_cols(i, j) = sink.u_cols[j][i];
            mods.v_cols(i, j) = sink.v_cols[j][i];
        }
    }

    BeamFactorization out{std::move(factors), std::move(mods), std::nullopt, a2, woodbury};

    if (woodbury && m > 0) {
        // C_L = L~^{-1} M_U ; C_R = M_Sigma M_V^T R~^{-1}, both by block
        // triangular solves at factor time.
        Matrix c_left = block_lower_solve(out.factors.L, blocking, out.mods.u_cols);
        Matrix v_sigma = out.mods.v_cols;
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t i = 0; i < n; ++i) v_sigma(i, j) *= out.mods.sigma_deltas[j];
        Matrix c_right =
            transpose(block_lower_solve(transpose(out.factors.R), blocking, v_sigma));
        Matrix c = matsub(Matrix::identity(m), matmul(c_right, c_left));
        PivotedLU c_lu(c); // GEPP; singular only when A itself is singular
        out.capacitance.emplace(CapacitanceParts{std::move(c_left), std::move(c_right),
                                                 std::move(c), std::move(c_lu)});
    }
    return out;
}

namespace {

std::vector<double> apply_factorization(const BeamFactorization& f,
                                        const std::vector<double>& rhs) {
    std::vector<double> x = block_forward_sub(f.factors.L, f.factors.blocking, rhs);
    if (f.capacitance) {
        const CapacitanceParts& cap = *f.capacitance;
        std::vector<double> t = matvec(cap.c_right, x);
        std::vector<double> s = cap.c_lu.solve(t);
        x = vecadd(x, matvec(cap.c_left, s));
    }
    return block_back_sub(f.factors.R, f.factors.blocking, x);
}

double relative_residual(const Matrix& a, double a2, const std::vector<double>& x,
                         const std::vector<double>& b) {
    const double rn = vec_norm2(vecsub(b, matvec(a, x)));
    const double xn = vec_norm2(x);
    if (a2 * xn == 0.0) return rn == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return rn / (a2 * xn);
}

} // namespace

SolveReport beam_solve(const BeamFactorization& f, const std::vector<double>& b,
                       const RefineOptions& refine, const Matrix& a_original) {
    if (b.size() != f.factors.L.rows())
        throw std::invalid_argument("beam_solve: right-hand side size mismatch");
    if (a_original.rows() != f.factors.L.rows() || !a_original.is_square())
        throw std::invalid_argument("beam_solve: original matrix shape mismatch");

    SolveReport report;
    report.woodbury_used = f.capacitance.has_value();
    report.x = apply_factorization(f, b);
    report.residuals.push_back(relative_residual(a_original, f.norm_a2, report.x, b));

    std::size_t grew = 0;
    while (report.iterations < refine.max_iters &&
           report.residuals.back() > refine.target_rel_residual) {
        const std::vector<double> r = vecsub(b, matvec(a_original, report.x));
        const std::vector<double> d = apply_factorization(f, r);
        report.x = vecadd(report.x, d);
        report.iterations += 1;
        report.residuals.push_back(relative_residual(a_original, f.norm_a2, report.x, b));
        const std::size_t it = report.residuals.size() - 1;
        grew = report.residuals[it] > report.residuals[it - 1] ? grew + 1 : 0;
        if (grew >= 2) {
            report.diverged = true;
            break;
        }
    }
    return report;
}

Matrix modified_matrix(const BeamFactorization& f, const Matrix& a) {
    if (a.rows() != f.factors.L.rows() || !a.is_square())
        throw std::invalid_argument("modified_matrix: shape mismatch");
    if (f.mods.count == 0) return a;
    Matrix out = a;
    for (std::size_t j = 0; j < f.mods.count; ++j) {
        const double d = f.mods.sigma_deltas[j];
        for (std::size_t i = 0; i < out.rows(); ++i) {
            const double ui = f.mods.u_cols(i, j);
            if (ui == 0.0) continue;
            for (std::size_t c = 0; c < out.cols(); ++c)
                out(i, c) += d * ui * f.mods.v_cols(c, j);
        }
    }
    return out;
}

} // namespace beamlu
