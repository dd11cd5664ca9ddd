#include "beamlu/block_lu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "beamlu/dense_solve.hpp"
#include "beamlu/errors.hpp"
#include "beamlu/svd.hpp"

namespace beamlu {

namespace {
constexpr double kUnitRoundoff = 0x1.0p-53;
}

const char* to_string(DiagFactorizer d) {
    switch (d) {
        case DiagFactorizer::identity: return "identity";
        case DiagFactorizer::pointwise_lu: return "pointwise_lu";
        case DiagFactorizer::unitary: return "unitary";
    }
    return "?";
}

bool GrowthTrace::has(const NormKind& kind) const {
    for (const auto& k : kinds_)
        if (k == kind) return true;
    return false;
}

double GrowthTrace::value(std::size_t step, const NormKind& kind) const {
    for (std::size_t i = 0; i < kinds_.size(); ++i)
        if (kinds_[i] == kind) return steps_.at(step).norms[i];
    throw std::invalid_argument("growth trace: norm kind was not traced");
}

double GrowthTrace::max_subdiag_ratio() const {
    double m = 0.0;
    for (const auto& s : steps_) m = std::max(m, s.subdiag_ratio);
    return m;
}

double GrowthTrace::min_diag_sigma() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : steps_) m = std::min(m, s.sigma_min_diag);
    return m;
}

double growth_factor(const GrowthTrace& trace, const NormKind& kind) {
    if (trace.num_steps() == 0) throw std::invalid_argument("growth_factor: empty trace");
    const double base = trace.value(0, kind);
    double peak = 0.0;
    for (std::size_t k = 0; k < trace.num_steps(); ++k)
        peak = std::max(peak, trace.value(k, kind));
    return peak / base;
}

namespace {

// Non-pivoted Doolittle LU of a block; L unit lower, R upper. A pivot with
// |pivot| <= u * ||d||_max counts as zero and reports breakdown.
void pointwise_lu_block(const Matrix& d, Matrix& l_kk, Matrix& r_kk, std::size_t block_index) {
    const std::size_t b = d.rows();
    double dmax = 0.0;
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < b; ++j) dmax = std::max(dmax, std::fabs(d(i, j)));
    Matrix w = d;
    l_kk = Matrix::identity(b);
    for (std::size_t k = 0; k < b; ++k) {
        const double piv = w(k, k);
        if (std::fabs(piv) <= kUnitRoundoff * dmax)
            throw block_singular_error("block lu: zero pivot in pointwise diagonal factorization",
                                       block_index);
        for (std::size_t i = k + 1; i < b; ++i) {
            const double l = w(i, k) / piv;
            l_kk(i, k) = l;
            w(i, k) = 0.0;
            for (std::size_t j = k + 1; j < b; ++j) w(i, j) -= l * w(k, j);
        }
    }
    r_kk = Matrix(b, b);
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = i; j < b; ++j) r_kk(i, j) = w(i, j);
}

// X with X * R = B for upper-triangular R (columns left to right).
Matrix right_solve_upper(const Matrix& b, const Matrix& r) {
    const std::size_t m = b.rows();
    const std::size_t n = r.rows();
    Matrix x(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            double s = b(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= x(i, k) * r(k, j);
            x(i, j) = s / r(j, j);
        }
    }
    return x;
}

// Y with L * Y = B for unit-lower-triangular L.
Matrix forward_solve_unit_lower(const Matrix& l, const Matrix& b) {
    const std::size_t n = l.rows();
    Matrix y(n, b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = b(i, j);
            for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y(k, j);
            y(i, j) = s;
        }
    }
    return y;
}

} // namespace

namespace detail {

BlockLUFactors factor_core(const Matrix& a, const BlockingScheme& blocking, DiagFactorizer diag,
                           const FactorOptions& opts, ModificationSink* mods) {
    if (!a.is_square()) throw std::invalid_argument("factor_block_lu: matrix must be square");
    if (a.empty()) throw std::invalid_argument("factor_block_lu: empty matrix");
    if (blocking.dim() != a.rows())
        throw std::invalid_argument("factor_block_lu: blocking inconsistent with matrix");
    for (const auto& kind : opts.trace_norms) {
        if (kind.is_block() &&
            !(kind.row_blocking() == blocking && kind.col_blocking() == blocking))
            throw std::invalid_argument(
                "factor_block_lu: traced block norms must use the elimination blocking");
    }
    if (mods && diag != DiagFactorizer::unitary)
        throw std::invalid_argument("factor_core: modifications require unitary diagonals");

    const std::size_t n = a.rows();
    const std::size_t nt = blocking.num_blocks();
    Matrix w = a; // trailing part holds A^(k) as elimination proceeds
    Matrix l(n, n);
    Matrix r(n, n);
    GrowthTrace trace(opts.trace_norms);

    for (std::size_t k = 0; k < nt; ++k) {
        const std::size_t off = blocking.offset(k);
        const std::size_t bs = blocking.block_size(k);
        const std::size_t end = off + bs;
        const bool has_trailing = k + 1 < nt;

        GrowthStep step;
        const Matrix schur = submatrix(w, off, n, off, n);
        const BlockingScheme tail = blocking.tail(k);
        step.norms.reserve(opts.trace_norms.size());
        for (const auto& kind : opts.trace_norms)
            step.norms.push_back(norm(schur, kind.with_blocking(tail, tail)));

        Matrix d = submatrix(w, off, end, off, end);
        Matrix l_kk, r_kk;
        Matrix l_sub; // subdiagonal column strip of L
        SvdResult sv; // unitary path only

        if (diag == DiagFactorizer::unitary) {
            sv = svd_small(d, opts.max_block_size);
            step.sigma_min_diag = sv.sigma.back();
            if (mods && mods->enabled) {
                for (std::size_t i = 0; i < sv.sigma.size(); ++i) {
                    if (sv.sigma[i] <= mods->tau) {
                        mods->count += 1;
                        mods->block_of.push_back(k);
                        mods->deltas.push_back(mods->tau - sv.sigma[i]);
                        std::vector<double> uc(n, 0.0), vc(n, 0.0);
                        for (std::size_t t = 0; t < bs; ++t) {
                            uc[off + t] = sv.U(t, i);
                            vc[off + t] = sv.Vt(i, t);
                        }
                        mods->u_cols.push_back(std::move(uc));
                        mods->v_cols.push_back(std::move(vc));
                        sv.sigma[i] = mods->tau;
                    }
                }
            } else if (has_trailing &&
                       sv.sigma.back() <= 64.0 * kUnitRoundoff * sv.sigma.front()) {
                throw block_singular_error(
                    "block lu: diagonal block singular to working precision", k);
            }
            l_kk = sv.U;
            r_kk = Matrix(bs, bs);
            for (std::size_t i = 0; i < bs; ++i)
                for (std::size_t j = 0; j < bs; ++j) r_kk(i, j) = sv.sigma[i] * sv.Vt(i, j);
        } else if (diag == DiagFactorizer::pointwise_lu) {
            step.sigma_min_diag = svd(d).sigma.back();
            pointwise_lu_block(d, l_kk, r_kk, k);
        } else { // identity
            step.sigma_min_diag = svd(d).sigma.back();
            l_kk = Matrix::identity(bs);
            r_kk = d;
        }

        place(l, off, off, l_kk);
        place(r, off, off, r_kk);

        if (has_trailing) {
            const Matrix a_sub = submatrix(w, end, n, off, end);
            const Matrix a_row = submatrix(w, off, end, end, n);

            // L_{k+1:nt,k} = A_sub * R_kk^{-1}, solved against the factored
            // diagonal block rather than by explicit inversion.
            switch (diag) {
                case DiagFactorizer::unitary: {
                    Matrix av = matmul(a_sub, transpose(sv.Vt));
                    for (std::size_t j = 0; j < bs; ++j) {
                        const double inv = 1.0 / sv.sigma[j]; // >= tau under modifications
                        for (std::size_t i = 0; i < av.rows(); ++i) av(i, j) *= inv;
                    }
                    l_sub = std::move(av);
                    break;
                }
                case DiagFactorizer::pointwise_lu: {
                    // L_sub = A_sub R_kk^{-1}: one triangular right-solve
                    l_sub = right_solve_upper(a_sub, r_kk);
                    break;
                }
                case DiagFactorizer::identity: {
                    try {
                        PivotedLU dt(transpose(d));
                        l_sub = transpose(dt.solve(transpose(a_sub)));
                    } catch (const numerical_error&) {
                        throw block_singular_error(
                            "block lu: identity factorizer hit a singular diagonal block", k);
                    }
                    break;
                }
            }

            // R_{k,k+1:nt} = L_kk^{-1} * A_row
            Matrix r_row;
            switch (diag) {
                case DiagFactorizer::unitary:
                    r_row = matmul(transpose(sv.U), a_row);
                    break;
                case DiagFactorizer::pointwise_lu:
                    r_row = forward_solve_unit_lower(l_kk, a_row);
                    break;
                case DiagFactorizer::identity:
                    r_row = a_row;
                    break;
            }

            place(l, end, off, l_sub);
            place(r, off, end, r_row);

            // subdiagonal ratio ||A_sub (A_kk)^{-1}||_2 = ||L_sub L_kk^{-1}||_2
            switch (diag) {
                case DiagFactorizer::unitary:
                case DiagFactorizer::identity:
                    step.subdiag_ratio = sigma_max(l_sub);
                    break;
                case DiagFactorizer::pointwise_lu:
                    try {
                        PivotedLU dt(transpose(d));
                        step.subdiag_ratio = sigma_max(transpose(dt.solve(transpose(a_sub))));
                    } catch (const numerical_error&) {
                        step.subdiag_ratio = std::numeric_limits<double>::infinity();
                    }
                    break;
            }

            const Matrix update = matmul(l_sub, r_row);
            for (std::size_t i = end; i < n; ++i)
                for (std::size_t j = end; j < n; ++j) w(i, j) -= update(i - end, j - end);
        }

        trace.push_step(std::move(step));
    }

    BlockLUFactors out{std::move(l), std::move(r), blocking, diag, std::move(trace)};
    return out;
}

} // namespace detail

BlockLUFactors factor_block_lu(const Matrix& a, const BlockingScheme& blocking,
                               DiagFactorizer diag, const FactorOptions& opts) {
    return detail::factor_core(a, blocking, diag, opts, nullptr);
}

std::vector<double> block_forward_sub(const Matrix& l, const BlockingScheme& blocking,
                                      const std::vector<double>& b) {
    Matrix y = block_lower_solve(l, blocking, Matrix::column(b));
    std::vector<double> out(b.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = y(i, 0);
    return out;
}

std::vector<double> block_back_sub(const Matrix& r, const BlockingScheme& blocking,
                                   const std::vector<double>& y) {
    Matrix x = block_upper_solve(r, blocking, Matrix::column(y));
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x(i, 0);
    return out;
}

Matrix block_lower_solve(const Matrix& l, const BlockingScheme& blocking, const Matrix& b) {
    if (l.rows() != blocking.dim() || b.rows() != l.rows())
        throw std::invalid_argument("block_lower_solve: shape mismatch");
    const std::size_t nt = blocking.num_blocks();
    Matrix rhs = b;
    Matrix y(b.rows(), b.cols());
    for (std::size_t k = 0; k < nt; ++k) {
        const std::size_t off = blocking.offset(k);
        const std::size_t end = off + blocking.block_size(k);
        const Matrix d = submatrix(l, off, end, off, end);
        Matrix yk;
        try {
            yk = PivotedLU(d).solve(submatrix(rhs, off, end, 0, b.cols()));
        } catch (const numerical_error&) {
            throw numerical_error("block substitution: singular diagonal block", k);
        }
        place(y, off, 0, yk);
        if (end < l.rows()) {
            const Matrix strip = submatrix(l, end, l.rows(), off, end);
            const Matrix upd = matmul(strip, yk);
            for (std::size_t i = 0; i < upd.rows(); ++i)
                for (std::size_t j = 0; j < upd.cols(); ++j) rhs(end + i, j) -= upd(i, j);
        }
    }
    return y;
}

Matrix block_upper_solve(const Matrix& r, const BlockingScheme& blocking, const Matrix& b) {
    if (r.rows() != blocking.dim() || b.rows() != r.rows())
        throw std::invalid_argument("block_upper_solve: shape mismatch");
    const std::size_t nt = blocking.num_blocks();
    Matrix rhs = b;
    Matrix x(b.rows(), b.cols());
    for (std::size_t k = nt; k-- > 0;) {
        const std::size_t off = blocking.offset(k);
        const std::size_t end = off + blocking.block_size(k);
        const Matrix d = submatrix(r, off, end, off, end);
        Matrix xk;
        try {
            xk = PivotedLU(d).solve(submatrix(rhs, off, end, 0, b.cols()));
        } catch (const numerical_error&) {
            throw numerical_error("block substitution: singular diagonal block", k);
        }
        place(x, off, 0, xk);
        if (off > 0) {
            const Matrix strip = submatrix(r, 0, off, off, end);
            const Matrix upd = matmul(strip, xk);
            for (std::size_t i = 0; i < upd.rows(); ++i)
                for (std::size_t j = 0; j < upd.cols(); ++j) rhs(i, j) -= upd(i, j);
        }
    }
    return x;
}

bool is_block_strongly_nonsingular(const Matrix& a, const BlockingScheme& blocking, double tol) {
    if (tol < 0.0) throw std::invalid_argument("is_block_strongly_nonsingular: tol must be >= 0");
    if (!a.is_square() || blocking.dim() != a.rows())
        throw std::invalid_argument("is_block_strongly_nonsingular: shape mismatch");
    const double a2 = sigma_max(a);
    for (std::size_t k = 0; k < blocking.num_blocks(); ++k) {
        const std::size_t end = blocking.offset(k) + blocking.block_size(k);
        const Matrix lead = submatrix(a, 0, end, 0, end);
        if (!(sigma_min(lead) > tol * a2)) return false;
    }
    return true;
}

} // namespace beamlu
