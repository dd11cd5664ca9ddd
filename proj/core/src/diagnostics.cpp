#include "beamlu/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "beamlu/dense_solve.hpp"
#include "beamlu/errors.hpp"
#include "beamlu/gallery.hpp"
#include "beamlu/svd.hpp"

namespace beamlu {

namespace {

constexpr double kSlack = 1e-9; // relative slack on the measured side
const double kInf = std::numeric_limits<double>::infinity();

double inverse_norm(const Matrix& a, const NormKind& kind) {
    try {
        return norm(inverse(a), kind);
    } catch (const numerical_error&) {
        return kInf;
    }
}

} // namespace

BoundCheck make_check(std::string name, double measured, double bound, std::string context) {
    BoundCheck c;
    c.name = std::move(name);
    c.measured = measured;
    c.bound = bound;
    c.satisfied = measured <= bound * (1.0 + kSlack);
    c.context = std::move(context);
    return c;
}

BoundCheck make_check_log10(std::string name, double log10_measured, double log10_bound,
                            std::string context) {
    BoundCheck c;
    c.name = std::move(name);
    c.measured = log10_measured;
    c.bound = log10_bound;
    c.satisfied = log10_measured <= log10_bound + std::log10(1.0 + kSlack);
    c.context = std::move(context);
    c.log_scale = true;
    return c;
}

BoundCheck make_skipped(std::string name, std::string reason, std::string context) {
    BoundCheck c;
    c.name = std::move(name);
    c.satisfied = true;
    c.skipped = true;
    c.note = std::move(reason);
    c.context = std::move(context);
    return c;
}

DominanceReport dominance(const Matrix& a, const BlockingScheme& blocking,
                          std::optional<NormKind> inner) {
    if (!a.is_square() || blocking.dim() != a.rows())
        throw std::invalid_argument("dominance: square matrix matching the blocking required");
    const std::size_t n = a.rows();
    DominanceReport rep;

    double dr = kInf, dc = kInf;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0, col = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            row += std::fabs(a(i, j));
            col += std::fabs(a(j, i));
        }
        dr = std::min(dr, std::fabs(a(i, i)) - row);
        dc = std::min(dc, std::fabs(a(i, i)) - col);
    }
    rep.pointwise.delta_r = dr;
    rep.pointwise.delta_c = dc;
    rep.pointwise.by_rows = dr > 0.0;
    rep.pointwise.by_cols = dc > 0.0;

    const NormKind inner_c = inner ? *inner : NormKind::one();
    const NormKind inner_r = inner ? *inner : NormKind::inf();
    rep.blockwise.inner_cols = inner_c.name();
    rep.blockwise.inner_rows = inner_r.name();

    const std::size_t nt = blocking.num_blocks();
    double bdr = kInf, bdc = kInf;
    for (std::size_t d = 0; d < nt; ++d) {
        const std::size_t o = blocking.offset(d);
        const std::size_t e = o + blocking.block_size(d);
        const Matrix diag = submatrix(a, o, e, o, e);
        double col_off = 0.0, row_off = 0.0;
        for (std::size_t b = 0; b < nt; ++b) {
            if (b == d) continue;
            const std::size_t bo = blocking.offset(b);
            const std::size_t be = bo + blocking.block_size(b);
            col_off += norm(submatrix(a, bo, be, o, e), inner_c);
            row_off += norm(submatrix(a, o, e, bo, be), inner_r);
        }
        const double inv_c = inverse_norm(diag, inner_c);
        const double inv_r = inverse_norm(diag, inner_r);
        bdc = std::min(bdc, inv_c == kInf ? -kInf : 1.0 / inv_c - col_off);
        bdr = std::min(bdr, inv_r == kInf ? -kInf : 1.0 / inv_r - row_off);
    }
    rep.blockwise.delta_c = bdc;
    rep.blockwise.delta_r = bdr;
    rep.blockwise.by_cols = bdc > 0.0;
    rep.blockwise.by_rows = bdr > 0.0;
    return rep;
}

ModificationFreeBound modification_free_bound(const DominanceReport& report, const Matrix& a) {
    ModificationFreeBound out;
    const double sqn = std::sqrt(static_cast<double>(a.rows()));
    if (report.pointwise.by_cols) out.tau_max_cols = report.pointwise.delta_c / sqn;
    if (report.pointwise.by_rows) out.tau_max_rows = report.pointwise.delta_r / sqn;
    if (report.pointwise.by_cols && report.pointwise.by_rows)
        out.tau_max_both = std::sqrt(report.pointwise.delta_c * report.pointwise.delta_r);
    // Block bounds are Varah-valid only for the corrected inner-norm pairing.
    if (report.blockwise.by_cols && report.blockwise.inner_cols == "one")
        out.block_tau_max_cols = report.blockwise.delta_c / sqn;
    if (report.blockwise.by_rows && report.blockwise.inner_rows == "inf")
        out.block_tau_max_rows = report.blockwise.delta_r / sqn;
    if (out.block_tau_max_cols && out.block_tau_max_rows)
        out.block_tau_max_both =
            std::sqrt(report.blockwise.delta_c * report.blockwise.delta_r);
    return out;
}

ModificationFreeBound h_matrix_bound(const Matrix& a, const std::vector<double>& d1,
                                     const std::vector<double>& d2) {
    const std::size_t n = a.rows();
    if (d1.size() != n || d2.size() != n)
        throw std::invalid_argument("h_matrix_bound: scaling size mismatch");
    for (double v : d1)
        if (!(v > 0.0 && v <= 1.0))
            throw std::invalid_argument("h_matrix_bound: D1 entries must lie in (0,1]");
    for (double v : d2)
        if (!(v > 0.0 && v <= 1.0))
            throw std::invalid_argument("h_matrix_bound: D2 entries must lie in (0,1]");

    Matrix d1a = a;
    Matrix ad2 = a;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            d1a(i, j) *= d1[i];
            ad2(i, j) *= d2[j];
        }
    const DominanceReport rc = dominance(d1a, BlockingScheme::single(n));
    const DominanceReport rr = dominance(ad2, BlockingScheme::single(n));
    ModificationFreeBound out;
    const double sqn = std::sqrt(static_cast<double>(n));
    if (rc.pointwise.by_cols) out.tau_max_cols = rc.pointwise.delta_c / sqn;
    if (rr.pointwise.by_rows) out.tau_max_rows = rr.pointwise.delta_r / sqn;
    if (out.tau_max_cols && out.tau_max_rows)
        out.tau_max_both = std::sqrt(rc.pointwise.delta_c * rr.pointwise.delta_r);
    return out;
}

std::vector<BoundCheck> check_growth_bounds(const Matrix& a, const BlockingScheme& blocking,
                                            const GrowthTrace& trace, std::string context) {
    std::vector<BoundCheck> out;
    const double n = static_cast<double>(a.rows());
    const DominanceReport dom = dominance(a, blocking);

    auto growth_if = [&](const NormKind& k) -> std::optional<double> {
        if (!trace.has(k)) return std::nullopt;
        return growth_factor(trace, k);
    };

    // pointwise dominance values (section on diagonal dominance)
    if (dom.pointwise.by_rows) {
        if (auto p = growth_if(NormKind::inf()))
            out.push_back(make_check("growth.row_dominant.P_inf==1", *p, 1.0, context));
        else
            out.push_back(make_skipped("growth.row_dominant.P_inf==1", "inf norm not traced",
                                       context));
    }
    if (dom.pointwise.by_cols) {
        if (auto p = growth_if(NormKind::one()))
            out.push_back(make_check("growth.col_dominant.P_one==1", *p, 1.0, context));
        else
            out.push_back(make_skipped("growth.col_dominant.P_one==1", "one norm not traced",
                                       context));
    }
    if (dom.pointwise.by_rows || dom.pointwise.by_cols) {
        if (auto p = growth_if(NormKind::max()))
            out.push_back(make_check("growth.dominant.P_max<=2", *p, 2.0, context));
        else
            out.push_back(make_skipped("growth.dominant.P_max<=2", "max norm not traced",
                                       context));
    }

    // blockwise dominance: P_bmax <= 2 and P_bsum <= 1 per traced block kind,
    // with dominance measured in the same inner norm
    std::optional<Matrix> ainv;
    bool ainv_failed = false;
    for (const auto& kind : trace.kinds()) {
        if (!kind.is_block()) continue;
        const NormKind& in = kind.inner();
        const DominanceReport bdom = dominance(a, blocking, in);
        const bool dominant = bdom.blockwise.by_cols || bdom.blockwise.by_rows;
        const double p = growth_factor(trace, kind);
        if (dominant) {
            if (kind.tag() == NormKind::Tag::block_max)
                out.push_back(make_check("growth.block_dominant.P_" + kind.name() + "<=2", p,
                                         2.0, context));
            else
                out.push_back(make_check("growth.block_dominant.P_" + kind.name() + "<=1", p,
                                         1.0, context));
        }
        if (kind.tag() == NormKind::Tag::block_max && bdom.blockwise.by_cols &&
            in.tag() == NormKind::Tag::one) {
            if (auto p1 = growth_if(NormKind::one()))
                out.push_back(make_check("growth.block_col_dominant.P_one<=4", *p1, 4.0,
                                         context));
        }
        if (kind.tag() == NormKind::Tag::block_max && bdom.blockwise.by_rows &&
            in.tag() == NormKind::Tag::inf) {
            if (auto pi = growth_if(NormKind::inf()))
                out.push_back(make_check("growth.block_row_dominant.P_inf<=4", *pi, 4.0,
                                         context));
        }

        // inverses of block dominant matrices: P_bmax < 2
        if (kind.tag() == NormKind::Tag::block_max) {
            if (!ainv && !ainv_failed) {
                try {
                    ainv = inverse(a);
                } catch (const numerical_error&) {
                    ainv_failed = true;
                }
            }
            if (ainv) {
                const DominanceReport idom = dominance(*ainv, blocking, in);
                if (idom.blockwise.by_rows || idom.blockwise.by_cols)
                    out.push_back(make_check(
                        "growth.inverse_block_dominant.P_" + kind.name() + "<2", p, 2.0,
                        context));
            }
        }
    }

    // norm-equivalence sandwich between P_max and P_alpha
    if (auto pmax = growth_if(NormKind::max())) {
        const NormKind alphas[] = {NormKind::one(), NormKind::spectral(), NormKind::inf(),
                                   NormKind::frobenius()};
        for (const auto& al : alphas) {
            if (auto pa = growth_if(al)) {
                out.push_back(make_check("growth.equivalence.upper.P_" + al.name(), *pa,
                                         n * (*pmax), context));
                out.push_back(make_check("growth.equivalence.lower.P_" + al.name() + "", *pmax,
                                         n * (*pa), context));
            }
        }
    } else {
        out.push_back(
            make_skipped("growth.equivalence", "max norm not traced", context));
    }

    // Schur growth bound: P_alpha <= 1 + max_k ||(A_{1:k})^{-1}|| * ||A||
    const NormKind schur_norms[] = {NormKind::spectral(), NormKind::frobenius()};
    for (const auto& al : schur_norms) {
        auto pa = growth_if(al);
        if (!pa) {
            out.push_back(make_skipped("growth.schur_bound.P_" + al.name(),
                                       al.name() + " norm not traced", context));
            continue;
        }
        const double na = norm(a, al);
        double worst = 0.0;
        for (std::size_t k = 0; k + 1 < blocking.num_blocks(); ++k) {
            const std::size_t end = blocking.offset(k) + blocking.block_size(k);
            worst = std::max(worst, inverse_norm(submatrix(a, 0, end, 0, end), al));
        }
        out.push_back(make_check("growth.schur_bound.P_" + al.name(), *pa,
                                 1.0 + worst * na, context));
    }
    return out;
}

namespace {

bool is_symmetric_positive_definite(const Matrix& a) {
    double amax = 0.0, asym = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            amax = std::max(amax, std::fabs(a(i, j)));
            asym = std::max(asym, std::fabs(a(i, j) - a(j, i)));
        }
    if (asym > 1e-14 * amax) return false;
    const std::vector<double> ev = symmetric_eigenvalues(a);
    return ev.back() > 0.0;
}

std::vector<BoundCheck> factor_bounds_impl(const BlockLUFactors& f, const Matrix& a,
                                           double tau_abs, const std::string& context) {
    std::vector<BoundCheck> out;
    const std::size_t nt = f.blocking.num_blocks();
    const double nb = static_cast<double>(f.blocking.max_block_size());
    const bool unitary_diag =
        f.diag == DiagFactorizer::unitary || f.diag == DiagFactorizer::identity;

    if (!unitary_diag) {
        out.push_back(make_skipped("factor.norm_bounds",
                                   "L/R norm bounds need unitary diagonal blocks", context));
        return out;
    }

    struct P {
        NormKind kind;
        const char* tag;
        double nb_pow; // n_b^{1/p}: 1 for spectral, sqrt(n_b) for Frobenius
    };
    const P ps[] = {{NormKind::spectral(), "spectral", 1.0},
                    {NormKind::frobenius(), "fro", std::sqrt(nb)}};

    std::optional<Matrix> ainv;
    for (const auto& p : ps) {
        if (!f.trace.has(p.kind)) {
            out.push_back(make_skipped(std::string("factor.R_bound.") + p.tag,
                                       "norm not traced", context));
            continue;
        }
        const double growth = growth_factor(f.trace, p.kind);
        const double na = norm(a, p.kind);
        const double nr = norm(f.R, p.kind);
        out.push_back(make_check(std::string("factor.R_bound.") + p.tag, nr,
                                 static_cast<double>(nt) * growth * na, context));

        if (!ainv) {
            try {
                ainv = inverse(a);
            } catch (const numerical_error&) {
                out.push_back(make_skipped(std::string("factor.L_bound.") + p.tag,
                                           "matrix singular, cond unavailable", context));
                continue;
            }
        }
        const double cond_p = na * norm(*ainv, p.kind);
        const double nl = norm(f.L, p.kind);
        out.push_back(make_check(std::string("factor.L_bound.") + p.tag, nl,
                                 p.nb_pow * static_cast<double>(nt) +
                                     static_cast<double>(nt) * growth * cond_p,
                                 context));
    }

    // tau-based ||L||_2 bound (BEAM): the threshold guarantees
    // sigma_min(A_kk^(k)) >= tau, so ||L||_2 <= nt + nt * P_2 * ||A~||_2 / tau.
    if (tau_abs > 0.0) {
        if (f.trace.has(NormKind::spectral())) {
            const double p2 = growth_factor(f.trace, NormKind::spectral());
            const double na2 = norm(a, NormKind::spectral());
            out.push_back(make_check("factor.L_bound.tau", norm(f.L, NormKind::spectral()),
                                     static_cast<double>(nt) +
                                         static_cast<double>(nt) * p2 * na2 / tau_abs,
                                     context));
        } else {
            out.push_back(
                make_skipped("factor.L_bound.tau", "spectral norm not traced", context));
        }
    }

    // column-dominance and SPD specializations of the L bound
    const DominanceReport dom = dominance(a, f.blocking);
    if (dom.pointwise.by_cols)
        out.push_back(make_check("factor.L_bound.col_dominant",
                                 norm(f.L, NormKind::spectral()),
                                 (std::pow(nb, 1.5) + 1.0) * static_cast<double>(nt), context));
    if (is_symmetric_positive_definite(a))
        out.push_back(make_check("factor.L_bound.spd", norm(f.L, NormKind::spectral()),
                                 (std::sqrt(cond2(a)) + 1.0) * static_cast<double>(nt),
                                 context));

    // ||L||_{max p} <= n_b^{1/p} under the subdiagonal assumption
    if (f.trace.max_subdiag_ratio() <= 1.0 + kSlack) {
        for (const auto& p : ps) {
            const NormKind bmax = NormKind::block_max(p.kind, f.blocking);
            out.push_back(make_check(std::string("factor.L_bmax_bound.") + p.tag,
                                     norm(f.L, bmax), p.nb_pow, context));
        }
    }
    return out;
}

} // namespace

std::vector<BoundCheck> check_factor_bounds(const BlockLUFactors& f, const Matrix& a,
                                            std::string context) {
    return factor_bounds_impl(f, a, 0.0, context);
}

std::vector<BoundCheck> check_factor_bounds(const BeamFactorization& f, const Matrix& a,
                                            std::string context) {
    return factor_bounds_impl(f.factors, modified_matrix(f, a), f.mods.tau, context);
}

PsiResult psi_and_capacitance(const BeamFactorization& f, const Matrix& a, std::string context) {
    PsiResult res;
    if (f.mods.count == 0) {
        res.report.note = "no modifications applied";
        return res;
    }

    const SvdResult sa = svd(a);
    if (sa.sigma.back() == 0.0) {
        res.report.note = "matrix singular to working precision, psi omitted";
        return res;
    }
    const double kappa = sa.sigma.front() / sa.sigma.back();
    const double tau_hat = f.mods.tau_hat;

    const Matrix at = modified_matrix(f, a);
    const double sigma_min_mod = svd(at).sigma.back();
    res.report.valid = true;
    res.report.psi = sa.sigma.back() / sigma_min_mod;

    // F = M_S^{1/2} M_V^T A^{-1} M_U M_S^{1/2}
    const std::size_t m = f.mods.count;
    Matrix x; // A^{-1} M_U
    try {
        x = solve_dense_lu(a, f.mods.u_cols);
    } catch (const numerical_error&) {
        res.report.valid = false;
        res.report.note = "matrix singular to working precision, psi omitted";
        res.checks.clear();
        return res;
    }
    Matrix fmat(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < a.rows(); ++t) s += f.mods.v_cols(t, i) * x(t, j);
            fmat(i, j) = std::sqrt(f.mods.sigma_deltas[i]) * s * std::sqrt(f.mods.sigma_deltas[j]);
        }
    Matrix gate = matadd(matmul(transpose(fmat), fmat), matadd(fmat, transpose(fmat)));
    // symmetrize against roundoff before the eigen solve
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const double v = 0.5 * (gate(i, j) + gate(j, i));
            gate(i, j) = v;
            gate(j, i) = v;
        }
    const double gate_min = symmetric_eigenvalues(gate).back();
    Matrix herm = matadd(fmat, transpose(fmat));
    res.report.f_hermitian_part_min_eig = 0.5 * symmetric_eigenvalues(herm).back();

    const double tk = tau_hat * kappa;
    if (tk < 1.0) {
        res.report.bound_general = 1.0 / (1.0 - tk);
        res.report.bound_general_valid = true;
        res.checks.push_back(make_check("psi.bound_general", res.report.psi,
                                        res.report.bound_general, context));
    }
    if (gate_min >= -1e-10) {
        res.report.bound_psd = 1.0 + tk;
        res.report.bound_psd_valid = true;
        res.checks.push_back(
            make_check("psi.bound_psd", res.report.psi, res.report.bound_psd, context));
    }

    // capacitance condition number: C = I - M_S M_V^T A~^{-1} M_U
    Matrix c;
    if (f.capacitance) {
        c = f.capacitance->c;
    } else {
        const Matrix xt = solve_dense_lu(at, f.mods.u_cols);
        c = Matrix::identity(m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                double s = 0.0;
                for (std::size_t t = 0; t < a.rows(); ++t)
                    s += f.mods.v_cols(t, i) * xt(t, j);
                c(i, j) -= f.mods.sigma_deltas[i] * s;
            }
    }
    res.report.cond_c = cond2(c);
    res.checks.push_back(make_check("psi.capacitance_cond", res.report.cond_c,
                                    (1.0 + tau_hat * res.report.psi * kappa) * (1.0 + tk),
                                    context));
    return res;
}

std::vector<BoundCheck> determinant_bounds(const BeamFactorization& f, const Matrix& a,
                                           std::string context) {
    std::vector<BoundCheck> out;
    const double log_tau_hat = std::log10(f.mods.tau_hat > 0.0 ? f.mods.tau_hat
                                                               : f.mods.tau / f.norm_a2);
    const double n = static_cast<double>(a.rows());
    const double log_a2 = std::log10(f.norm_a2);

    const Matrix at = modified_matrix(f, a);
    const SvdResult sat = svd(at);
    const double log_at2 = std::log10(sat.sigma.front());
    const double log_ratio = log_at2 - log_a2;

    out.push_back(make_check_log10("det.inv_norm", -std::log10(sat.sigma.back()),
                                   (n - 1.0) * log_ratio - n * log_tau_hat - log_a2, context));
    out.push_back(make_check_log10("det.cond",
                                   log_at2 - std::log10(sat.sigma.back()),
                                   n * log_ratio - n * log_tau_hat, context));

    const BlockingScheme& bl = f.factors.blocking;
    for (std::size_t k = 0; k + 1 < bl.num_blocks(); ++k) {
        const std::size_t end = bl.offset(k) + bl.block_size(k);
        const Matrix lead = submatrix(at, 0, end, 0, end);
        const SvdResult sl = svd(lead);
        const double nk = static_cast<double>(end);
        out.push_back(make_check_log10(
            "det.leading_block_" + std::to_string(k + 1),
            log_a2 - std::log10(sl.sigma.back()),
            (nk - 1.0) * (std::log10(sl.sigma.front()) - log_a2) - nk * log_tau_hat, context));
    }
    return out;
}

std::vector<BoundCheck> zielke_growth_check(std::size_t n, std::size_t block_size, double tau) {
    if (!(tau > 0.0 && tau <= 0.5))
        throw std::invalid_argument("zielke_growth_check: tau must lie in (0, 1/2]");
    const BlockingScheme blocking = BlockingScheme::uniform(n, block_size);
    if (blocking.min_block_size() < 2)
        throw std::invalid_argument("zielke_growth_check: all blocks must have size >= 2");

    const Matrix a = generate(MatrixSpec::zielke(n));
    const double a2 = sigma_max(a);
    FactorOptions opts;
    opts.trace_norms = {NormKind::max()};
    const BeamFactorization f = beam_factor(a, blocking, tau / a2, false, opts);

    const double nt = static_cast<double>(blocking.num_blocks());
    const double p_max = growth_factor(f.factors.trace, NormKind::max());
    const double expected = std::pow(tau, 1.0 - nt);
    const std::string ctx = "zielke(n=" + std::to_string(n) +
                            ",nb=" + std::to_string(block_size) + ",tau=" + std::to_string(tau) +
                            ")";

    std::vector<BoundCheck> out;
    BoundCheck growth = make_check("zielke.growth_rel_dev",
                                   std::fabs(p_max / expected - 1.0), 1e-8, ctx);
    growth.note = "P_max=" + std::to_string(p_max);
    out.push_back(std::move(growth));

    // One modification per diagonal block while the recursion advances; the
    // final block's Schur complement carries the grown entries and its
    // singular values stay above tau, so it is never modified: m = nt - 1.
    std::vector<std::size_t> per_block(blocking.num_blocks(), 0);
    for (std::size_t b : f.mods.block_of) per_block[b] += 1;
    double worst_dev = 0.0;
    for (std::size_t k = 0; k + 1 < per_block.size(); ++k)
        worst_dev = std::max(worst_dev, std::fabs(static_cast<double>(per_block[k]) - 1.0));
    worst_dev = std::max(worst_dev, static_cast<double>(per_block.back()));
    out.push_back(make_check("zielke.mod_count",
                             std::fabs(static_cast<double>(f.mods.count) - (nt - 1.0)), 0.0,
                             ctx));
    out.push_back(make_check("zielke.one_mod_per_leading_block", worst_dev, 0.0, ctx));
    return out;
}

} // namespace beamlu
