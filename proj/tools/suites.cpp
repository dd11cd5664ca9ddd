#include "suites.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include "beamlu/beam.hpp"
#include "beamlu/dense_solve.hpp"
#include "beamlu/errors.hpp"
#include "beamlu/gallery.hpp"
#include "beamlu/prng.hpp"
#include "beamlu/svd.hpp"

namespace beamlu::cli {

namespace {

constexpr double kU = 0x1.0p-53;

struct Failures {
    std::size_t count = 0;
    std::string first;

    void note(bool ok, const std::string& what) {
        if (ok) return;
        ++count;
        if (first.empty()) first = what;
    }
};

std::string summarize(const Failures& f, std::size_t total, const std::string& extra = {}) {
    std::ostringstream os;
    os << total << " checks";
    if (!extra.empty()) os << ", " << extra;
    if (f.count) os << "; " << f.count << " FAILED, first: " << f.first;
    return os.str();
}

BlockingScheme random_blocking(std::size_t n, std::size_t max_block, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<std::size_t> starts{1};
    while (starts.back() <= n) {
        const std::size_t step = 1 + static_cast<std::size_t>(rng.uniform() * max_block);
        starts.push_back(std::min(starts.back() + step, n + 1));
    }
    if (starts.back() != n + 1) starts.push_back(n + 1);
    return BlockingScheme(starts, n);
}

bool all_satisfied(const std::vector<BoundCheck>& checks, std::string* first_bad = nullptr) {
    for (const auto& c : checks) {
        if (!c.skipped && !c.satisfied) {
            if (first_bad) *first_bad = c.name;
            return false;
        }
    }
    return true;
}

// ---- criterion 1: Zielke worst-case growth -------------------------------

CriterionResult criterion_zielke(AcceptanceTally& tally) {
    CriterionResult res{1, "zielke worst-case growth", true, "", 0};
    const struct {
        std::size_t n, nb;
        double tau;
    } tuples[] = {{8, 2, 0.25}, {8, 2, 0.5}, {16, 2, 0.25}, {16, 4, 0.1}};
    Failures fails;
    std::size_t checks = 0;
    for (const auto& t : tuples) {
        const auto cs = zielke_growth_check(t.n, t.nb, t.tau);
        checks += cs.size();
        std::string bad;
        fails.note(all_satisfied(cs, &bad),
                   "(" + std::to_string(t.n) + "," + std::to_string(t.nb) + "," +
                       std::to_string(t.tau) + "):" + bad);
        // factor-bound tally on the same runs, with full traces
        const Matrix a = generate(MatrixSpec::zielke(t.n));
        const BeamFactorization f = beam_factor(
            a, BlockingScheme::uniform(t.n, t.nb), t.tau / sigma_max(a), false);
        tally.absorb(check_factor_bounds(f, a));
    }
    res.passed = fails.count == 0;
    res.detail = summarize(fails, checks,
                           "modification count checked as nt-1: one per block except the "
                           "final block, whose singular values stay above tau");
    return res;
}

// ---- criterion 2: Turing matrix ------------------------------------------

CriterionResult criterion_turing(AcceptanceTally&) {
    CriterionResult res{2, "turing inverse norm 2^(n-1)", true, "", 0};
    Failures fails;
    std::size_t checks = 0;
    for (std::size_t n : {5u, 10u, 20u, 30u}) {
        const Matrix t = generate(MatrixSpec::turing_t(n));
        const double got = norm(inverse(t), NormKind::inf());
        ++checks;
        fails.note(got == std::pow(2.0, static_cast<double>(n - 1)),
                   "n=" + std::to_string(n) + " got " + std::to_string(got));
    }
    res.passed = fails.count == 0;
    res.detail = summarize(fails, checks, "inf-operator norm, exact equality");
    return res;
}

// ---- criterion 3: pointwise diagonal dominance growth ---------------------

CriterionResult criterion_diag_dominance(AcceptanceTally& tally) {
    CriterionResult res{3, "diagonal-dominance growth values", true, "", 0};
    Failures fails;
    std::size_t checks = 0;
    for (int family = 0; family < 3; ++family) {
        for (std::uint64_t i = 0; i < 50; ++i) {
            SplitMix64 rng(0xC3000 + family * 1000 + i);
            const std::size_t n = 8 + static_cast<std::size_t>(rng.uniform() * 57); // <= 64
            const double delta = 0.1 + 0.9 * rng.uniform();
            const std::uint64_t seed = 0xD0 + i;
            const MatrixSpec spec = family == 0   ? MatrixSpec::diagdom_rows(n, delta, seed)
                                    : family == 1 ? MatrixSpec::diagdom_cols(n, delta, seed)
                                                  : MatrixSpec::diagdom_both(n, delta, seed);
            const Matrix a = generate(spec);
            const BlockingScheme bl = random_blocking(n, 6, 0xB10C + i + family * 77);
            const BlockLUFactors f = factor_block_lu(a, bl, DiagFactorizer::unitary);
            const std::string tag = spec.to_string();
            if (family == 0 || family == 2) {
                ++checks;
                fails.note(std::fabs(growth_factor(f.trace, NormKind::inf()) - 1.0) <= 1e-12,
                           "P_inf " + tag);
            }
            if (family == 1 || family == 2) {
                ++checks;
                fails.note(std::fabs(growth_factor(f.trace, NormKind::one()) - 1.0) <= 1e-12,
                           "P_one " + tag);
            }
            ++checks;
            fails.note(growth_factor(f.trace, NormKind::max()) <= 2.0 + 1e-9, "P_max " + tag);
            tally.absorb(check_factor_bounds(f, a, tag));
        }
    }
    res.passed = fails.count == 0;
    res.detail = summarize(fails, checks, "150 instances, n <= 64, random blockings");
    return res;
}

// ---- criterion 4: block dominance growth -----------------------------------

CriterionResult criterion_block_dominance(AcceptanceTally& tally) {
    CriterionResult res{4, "block-dominance growth values", true, "", 0};
    Failures fails;
    std::size_t checks = 0;
    for (std::uint64_t i = 0; i < 50; ++i) {
        SplitMix64 rng(0xC4000 + i);
        const std::size_t bs = 3 + static_cast<std::size_t>(rng.uniform() * 4);
        const std::size_t nt = 3 + static_cast<std::size_t>(rng.uniform() * 6);
        const std::size_t n = bs * nt;
        const double Delta = 0.2 + 0.8 * rng.uniform();
        const BlockingScheme bl = BlockingScheme::uniform(n, bs);
        const Matrix a = generate(MatrixSpec::block_diagdom_cols(n, bl, Delta, 0xE0 + i));
        FactorOptions opts;
        opts.trace_norms = default_trace_norms();
        opts.trace_norms.push_back(NormKind::block_max(NormKind::one(), bl));
        opts.trace_norms.push_back(NormKind::block_sum(NormKind::one(), bl));
        const BlockLUFactors f = factor_block_lu(a, bl, DiagFactorizer::unitary, opts);
        const std::string tag = "block_diagdom_cols#" + std::to_string(i);
        checks += 3;
        fails.note(growth_factor(f.trace, NormKind::block_max(NormKind::one(), bl)) <=
                       2.0 + 1e-9,
                   "P_bmax1 " + tag);
        fails.note(growth_factor(f.trace, NormKind::block_sum(NormKind::one(), bl)) <=
                       1.0 + 1e-9,
                   "P_bsum1 " + tag);
        fails.note(growth_factor(f.trace, NormKind::one()) <= 4.0 + 1e-9, "P_one " + tag);
        tally.absorb(check_factor_bounds(f, a, tag));
    }
    for (std::uint64_t i = 0; i < 20; ++i) {
        SplitMix64 rng(0xC4900 + i);
        const std::size_t bs = 3 + static_cast<std::size_t>(rng.uniform() * 3);
        const std::size_t nt = 3 + static_cast<std::size_t>(rng.uniform() * 4);
        const std::size_t n = bs * nt;
        const double Delta = 0.3 + 0.7 * rng.uniform();
        const BlockingScheme bl = BlockingScheme::uniform(n, bs);
        const Matrix a =
            generate(MatrixSpec::inverse_block_diagdom_rows(n, bl, Delta, 0xF0 + i));
        FactorOptions opts;
        opts.trace_norms = default_trace_norms();
        opts.trace_norms.push_back(NormKind::block_max(NormKind::inf(), bl));
        const BlockLUFactors f = factor_block_lu(a, bl, DiagFactorizer::unitary, opts);
        ++checks;
        fails.note(growth_factor(f.trace, NormKind::block_max(NormKind::inf(), bl)) <
                       2.0 * (1 + 1e-9),
                   "P_bmaxinf inverse#" + std::to_string(i));
        tally.absorb(check_factor_bounds(f, a, "inverse_block_diagdom_rows#" + std::to_string(i)));
    }
    res.passed = fails.count == 0;
    res.detail = summarize(fails, checks, "50 block-col-dominant + 20 inverses");
    return res;
}

// ---- criterion 5: backward-error envelopes ---------------------------------

CriterionResult criterion_backward_error(AcceptanceTally& tally) {
    CriterionResult res{5, "backward-error envelopes", true, "", 0};
    Failures fails;
    std::size_t checks = 0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        SplitMix64 rng(0xC5000 + i);
        const std::size_t n = 8 + static_cast<std::size_t>(rng.uniform() * 121); // <= 128
        const double kappa = std::pow(10.0, 6.0 * rng.uniform());
        const Matrix a = generate(MatrixSpec::random_cond(n, std::max(kappa, 1.5), 0x5EED + i));
        const BlockingScheme bl = random_blocking(n, 8, 0xB10C5 + i);
        FactorOptions opts;
        opts.trace_norms = {NormKind::max(), NormKind::frobenius()};

        for (int m = 0; m < 3; ++m) {
            Matrix factored = a;
            BlockLUFactors f{{}, {}, bl, DiagFactorizer::identity, {}};
            std::string tag;
            try {
                if (m == 2) {
                    const BeamFactorization bf = beam_factor(a, bl, 1e-8, false, opts);
                    factored = modified_matrix(bf, a);
                    f = bf.factors;
                    tag = "beam#" + std::to_string(i);
                    tally.absorb(check_factor_bounds(bf, a, tag));
                } else {
                    const DiagFactorizer d =
                        m == 0 ? DiagFactorizer::identity : DiagFactorizer::pointwise_lu;
                    f = factor_block_lu(a, bl, d, opts);
                    tag = std::string(to_string(d)) + "#" + std::to_string(i);
                    tally.absorb(check_factor_bounds(f, a, tag));
                }
            } catch (const numerical_error& e) {
                ++checks;
                fails.note(false, tag + " breakdown: " + e.what());
                continue;
            }

            const double p_max = growth_factor(f.trace, NormKind::max());
            const double resid =
                norm(matsub(factored, matmul(f.L, f.R)), NormKind::max());
            // Identity and unitary diagonal blocks are stable block
            // operations, so the growth-scaled envelope alone applies. The
            // non-pivoted pointwise factorizer can amplify inside a block,
            // which the backward-error theorem covers with its ||L|| ||R||
            // term; that term is included for this method only.
            double envelope = 10.0 * n * kU * p_max * norm(factored, NormKind::max());
            if (m == 1)
                envelope += 10.0 * n * kU * norm(f.L, NormKind::max()) *
                            norm(f.R, NormKind::max());
            ++checks;
            fails.note(resid <= envelope, "factor residual " + tag);

            const std::vector<double> xt(n, 1.0);
            const std::vector<double> b = matvec(factored, xt);
            const std::vector<double> x =
                block_back_sub(f.R, bl, block_forward_sub(f.L, bl, b));
            const double l2 = norm(f.L, NormKind::spectral());
            const double r2 = norm(f.R, NormKind::spectral());
            const double rs = vec_norm2(vecsub(b, matvec(matmul(f.L, f.R), x)));
            ++checks;
            fails.note(rs <= 100.0 * n * kU * l2 * r2 * vec_norm2(x),
                       "solve residual " + tag);
        }
    }
    res.passed = fails.count == 0;
    res.detail = summarize(fails, checks,
                           "200 instances x 3 methods, n <= 128, cond <= 1e6; pointwise "
                           "factor residual uses the two-term theorem envelope");
    return res;
}

// ---- criterion 6: pointwise oracle equivalence -----------------------------

CriterionResult criterion_oracle(AcceptanceTally&) {
    CriterionResult res{6, "scalar-block LU matches Doolittle oracle", true, "", 0};
    Failures fails;
    std::size_t checks = 0;
    for (std::uint64_t i = 0; i < 50; ++i) {
        SplitMix64 rng(0xC6000 + i);
        const std::size_t n = 8 + static_cast<std::size_t>(rng.uniform() * 33);
        const double delta = 0.2 + 0.8 * rng.uniform();
        const Matrix a = generate(MatrixSpec::diagdom_cols(n, delta, 0xAB + i));
        FactorOptions opts;
        opts.trace_norms = {NormKind::max()};
        const BlockLUFactors f =
            factor_block_lu(a, BlockingScheme::scalar(n), DiagFactorizer::pointwise_lu, opts);

        // independent left-looking Doolittle with running subtraction
        Matrix lo = Matrix::identity(n);
        Matrix uo(n, n);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t j = k; j < n; ++j) {
                double t = a(k, j);
                for (std::size_t s = 0; s < k; ++s) t -= lo(k, s) * uo(s, j);
                uo(k, j) = t;
            }
            for (std::size_t r2 = k + 1; r2 < n; ++r2) {
                double t = a(r2, k);
                for (std::size_t s = 0; s < k; ++s) t -= lo(r2, s) * uo(s, k);
                lo(r2, k) = t / uo(k, k);
            }
        }
        bool ok = true;
        for (std::size_t r2 = 0; r2 < n && ok; ++r2)
            for (std::size_t c = 0; c < n && ok; ++c) {
                if (std::fabs(f.L(r2, c) - lo(r2, c)) > 4 * kU * std::fabs(lo(r2, c))) ok = false;
                if (std::fabs(f.R(r2, c) - uo(r2, c)) > 4 * kU * std::fabs(uo(r2, c))) ok = false;
            }
        ++checks;
        fails.note(ok, "instance " + std::to_string(i));
    }
    res.passed = fails.count == 0;
    res.detail = summarize(fails, checks, "50 column-dominant instances, 4u per entry");
    return res;
}

// ---- criterion 7: modification-free soundness ------------------------------

CriterionResult criterion_modfree(AcceptanceTally& tally) {
    CriterionResult res{7, "modification-free criteria", true, "", 0};
    Failures fails;
    std::size_t checks = 0;

    auto run_case = [&](const Matrix& a, const BlockingScheme& bl, double tau_abs,
                        const std::string& tag) {
        const double a2 = sigma_max(a);
        const BeamFactorization f = beam_factor(a, bl, tau_abs / a2, false);
        ++checks;
        fails.note(f.mods.count == 0, tag + " m=" + std::to_string(f.mods.count));
        tally.absorb(check_factor_bounds(f, a, tag));
    };

    for (std::uint64_t i = 0; i < 100; ++i) {
        SplitMix64 rng(0xC7000 + i);
        const std::size_t n = 8 + static_cast<std::size_t>(rng.uniform() * 17);
        const double delta = 0.2 + 1.3 * rng.uniform();
        const BlockingScheme bl = random_blocking(n, 4, 0xB10C7 + i);

        const Matrix ac = generate(MatrixSpec::diagdom_cols(n, delta, 0x700 + i));
        const DominanceReport rc = dominance(ac, bl);
        run_case(ac, bl, 0.99 * *modification_free_bound(rc, ac).tau_max_cols,
                 "cols#" + std::to_string(i));

        const Matrix ar = generate(MatrixSpec::diagdom_rows(n, delta, 0x701 + i));
        const DominanceReport rr = dominance(ar, bl);
        run_case(ar, bl, 0.99 * *modification_free_bound(rr, ar).tau_max_rows,
                 "rows#" + std::to_string(i));

        const Matrix ab = generate(MatrixSpec::diagdom_both(n, delta, 0x702 + i));
        const DominanceReport rb = dominance(ab, bl);
        run_case(ab, bl, 0.99 * *modification_free_bound(rb, ab).tau_max_both,
                 "both#" + std::to_string(i));
    }
    for (std::uint64_t i = 0; i < 100; ++i) {
        SplitMix64 rng(0xC7900 + i);
        const std::size_t bs = 3 + static_cast<std::size_t>(rng.uniform() * 2);
        const std::size_t nt = 3 + static_cast<std::size_t>(rng.uniform() * 4);
        const std::size_t n = bs * nt;
        const double Delta = 0.3 + 0.9 * rng.uniform();
        const BlockingScheme bl = BlockingScheme::uniform(n, bs);
        const Matrix a = generate(MatrixSpec::block_diagdom_cols(n, bl, Delta, 0x703 + i));
        const DominanceReport rep = dominance(a, bl);
        run_case(a, bl, 0.99 * *modification_free_bound(rep, a).block_tau_max_cols,
                 "block_cols#" + std::to_string(i));
    }
    for (std::uint64_t i = 0; i < 100; ++i) {
        SplitMix64 rng(0xC7A00 + i);
        const std::size_t n = 8 + static_cast<std::size_t>(rng.uniform() * 17);
        const double kappa = std::pow(10.0, 1.0 + 3.0 * rng.uniform());
        const Matrix a = generate(MatrixSpec::spd(n, kappa, 0x704 + i));
        const BlockingScheme bl = random_blocking(n, 4, 0xB10C8 + i);
        // tau_max for SPD is sigma_min(A); tau_hat kappa <= 1
        run_case(a, bl, 0.99 * svd(a).sigma.back(), "spd#" + std::to_string(i));
    }
    res.passed = fails.count == 0;
    res.detail = summarize(fails, checks, "100 instances per family");
    return res;
}

// ---- criterion 8: psi and capacitance bounds -------------------------------

struct PsiInstance {
    Matrix a;
    BlockingScheme blocking;
    double tau_hat;
};

// The SPD group for the psi/capacitance criteria: modifications forced by
// placing tau just above the smallest diagonal-block singular value seen
// along the elimination (>= 1/kappa in relative terms).
std::vector<PsiInstance> psi_spd_instances() {
    std::vector<PsiInstance> out;
    for (std::uint64_t i = 0; i < 50; ++i) {
        SplitMix64 rng(0xC8000 + i);
        const std::size_t n = 24;
        const double kappa = std::pow(10.0, 2.0 + 4.0 * rng.uniform());
        const Matrix a = generate(MatrixSpec::spd(n, kappa, 0x800 + i));
        const BlockingScheme bl = BlockingScheme::uniform(n, 4);
        const BlockLUFactors probe = factor_block_lu(a, bl, DiagFactorizer::unitary);
        const double tau_hat =
            std::min(0.5, 1.05 * probe.trace.min_diag_sigma() / sigma_max(a));
        out.push_back({a, bl, tau_hat});
    }
    return out;
}

// The general group: tau_hat * cond = 0.5; modifications occur only when a
// leading principal submatrix happens to be near-singular.
std::vector<PsiInstance> psi_general_instances() {
    std::vector<PsiInstance> out;
    for (std::uint64_t i = 0; i < 50; ++i) {
        SplitMix64 rng(0xC8900 + i);
        const std::size_t n = 24;
        const double kappa = std::pow(10.0, 1.0 + 3.0 * rng.uniform());
        const Matrix a = generate(MatrixSpec::random_cond(n, kappa, 0x801 + i));
        out.push_back({a, random_blocking(n, 5, 0xB10C9 + i), 0.5 / cond2(a)});
    }
    return out;
}

CriterionResult criterion_psi(AcceptanceTally& tally) {
    CriterionResult res{8, "psi and capacitance bounds", true, "", 0};
    Failures fails;
    std::size_t checks = 0;
    std::size_t modified = 0;

    const std::vector<PsiInstance> spd = psi_spd_instances();
    for (std::size_t i = 0; i < spd.size(); ++i) {
        const Matrix& a = spd[i].a;
        const std::string tag = "spd#" + std::to_string(i);
        const BeamFactorization f = beam_factor(a, spd[i].blocking, spd[i].tau_hat, true);
        ++checks;
        fails.note(f.mods.count > 0, tag + " expected forced modification");
        if (f.mods.count == 0) continue;
        ++modified;
        const double kappa = cond2(a);
        const double tk = f.mods.tau_hat * kappa;
        const PsiResult r = psi_and_capacitance(f, a, tag);
        checks += 3;
        fails.note(r.report.valid && r.report.bound_psd_valid, tag + " PSD gate");
        fails.note(r.report.psi <= 1.0 + tk + 1e-6, tag + " psi bound");
        fails.note(r.report.cond_c <= (1.0 + f.mods.tau_hat * r.report.psi * kappa) *
                                          (1.0 + tk) * (1.0 + 1e-9),
                   tag + " capacitance cond");
        tally.absorb(check_factor_bounds(f, a, tag));
    }

    const std::vector<PsiInstance> gen = psi_general_instances();
    for (std::size_t i = 0; i < gen.size(); ++i) {
        const std::string tag = "general#" + std::to_string(i);
        const BeamFactorization f = beam_factor(gen[i].a, gen[i].blocking, gen[i].tau_hat, true);
        const PsiResult r = psi_and_capacitance(f, gen[i].a, tag);
        const double psi = r.report.valid ? r.report.psi : 1.0;
        ++checks;
        fails.note(psi <= 2.0 + 1e-6, tag + " psi<=2");
        tally.absorb(check_factor_bounds(f, gen[i].a, tag));
    }

    res.passed = fails.count == 0;
    res.detail = summarize(fails, checks,
                           std::to_string(modified) + "/50 SPD instances modified");
    return res;
}

// ---- criterion 9: Woodbury exactness ---------------------------------------

CriterionResult criterion_woodbury(AcceptanceTally&) {
    CriterionResult res{9, "woodbury exactness and refinement", true, "", 0};
    Failures fails;
    std::size_t checks = 0;

    auto check_instance = [&](const Matrix& a, const BeamFactorization& f,
                              const std::string& tag) {
        const std::size_t n = a.rows();
        const std::vector<double> xt(n, 1.0);
        const std::vector<double> b = matvec(a, xt);
        const SolveReport raw = beam_solve(f, b, {0, 0.0}, a);
        const double cond_c = f.capacitance ? cond2(f.capacitance->c) : 1.0;
        const double p2 = growth_factor(f.factors.trace, NormKind::spectral());
        ++checks;
        fails.note(raw.residuals.back() <= 1e3 * n * kU * cond_c * p2, tag + " raw residual");
        const SolveReport ref = beam_solve(f, b, {10, 1e-12}, a);
        ++checks;
        fails.note(ref.residuals.back() <= 1e-12 && ref.iterations <= 10,
                   tag + " refined residual");
    };

    std::size_t modified = 0;
    for (const bool spd_group : {true, false}) {
        const std::vector<PsiInstance> inst =
            spd_group ? psi_spd_instances() : psi_general_instances();
        for (std::size_t i = 0; i < inst.size(); ++i) {
            const BeamFactorization f =
                beam_factor(inst[i].a, inst[i].blocking, inst[i].tau_hat, true);
            if (f.mods.count == 0) continue;
            ++modified;
            check_instance(inst[i].a, f,
                           (spd_group ? "spd#" : "general#") + std::to_string(i));
        }
    }
    const Matrix swap = generate(MatrixSpec::leading_swap(2));
    const BeamFactorization fs = beam_factor(swap, BlockingScheme::scalar(2), 0.1, true);
    check_instance(swap, fs, "leading_swap");

    res.passed = fails.count == 0;
    res.detail = summarize(fails, checks,
                           std::to_string(modified) + " modified instances + swap");
    return res;
}

// ---- criterion 10: factor-norm bounds --------------------------------------

CriterionResult criterion_factor_bounds(AcceptanceTally& tally) {
    CriterionResult res{10, "factor-norm bounds across criteria 1-8", true, "", 0};
    res.passed = tally.factor_failures == 0 && tally.factor_checks > 0;
    std::ostringstream os;
    os << tally.factor_checks << " factor-bound checks accumulated";
    if (tally.factor_failures) {
        os << "; " << tally.factor_failures << " FAILED, first: "
           << tally.failure_names.front();
    }
    res.detail = os.str();
    return res;
}

// ---- criterion 11: norm property suite --------------------------------------

CriterionResult criterion_norm_properties(AcceptanceTally&) {
    CriterionResult res{11, "norm property suite (1000 trials)", true, "", 0};
    Failures fails;
    std::size_t checks = 0;
    const NormKind scalar_kinds[] = {NormKind::max(),       NormKind::one(),
                                     NormKind::inf(),       NormKind::frobenius(),
                                     NormKind::sum(),       NormKind::spectral()};

    for (std::uint64_t trial = 0; trial < 1000; ++trial) {
        SplitMix64 rng(0xC11000 + trial);
        const std::size_t r = 2 + static_cast<std::size_t>(rng.uniform() * 9);
        const std::size_t c = 2 + static_cast<std::size_t>(rng.uniform() * 9);
        Matrix a(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) a(i, j) = rng.symmetric();
        const BlockingScheme rb = random_blocking(r, 3, 0xA0000 + trial);
        const BlockingScheme cb = random_blocking(c, 3, 0xA9000 + trial);
        const double rt = static_cast<double>(rb.num_blocks());
        const double ct = static_cast<double>(cb.num_blocks());

        // Eq (1.1): max over blocks <= norm <= sum over blocks
        for (const auto& kind : scalar_kinds) {
            double mx = 0.0, sm = 0.0;
            for (std::size_t bi = 0; bi < rb.num_blocks(); ++bi)
                for (std::size_t bj = 0; bj < cb.num_blocks(); ++bj) {
                    const double v =
                        norm(submatrix(a, rb.offset(bi), rb.offset(bi) + rb.block_size(bi),
                                       cb.offset(bj), cb.offset(bj) + cb.block_size(bj)),
                             kind);
                    mx = std::max(mx, v);
                    sm += v;
                }
            const double na = norm(a, kind);
            checks += 2;
            fails.note(mx <= na * (1 + 1e-12), "eq1.1 lower " + kind.name());
            fails.note(na <= sm * (1 + 1e-12), "eq1.1 upper " + kind.name());
        }

        // sandwich + tightened equivalences
        for (const auto& inner :
             {NormKind::max(), NormKind::one(), NormKind::inf(), NormKind::frobenius(),
              NormKind::spectral()}) {
            const double bmax = norm(a, NormKind::block_max(inner, rb, cb));
            const double bsum = norm(a, NormKind::block_sum(inner, rb, cb));
            const double na = norm(a, inner);
            checks += 4;
            fails.note(bsum / (rt * ct) <= bmax * (1 + 1e-12), "sandwich1 " + inner.name());
            fails.note(bmax <= na * (1 + 1e-12), "sandwich2 " + inner.name());
            fails.note(na <= bsum * (1 + 1e-12), "sandwich3 " + inner.name());
            fails.note(bsum <= rt * ct * bmax * (1 + 1e-12), "sandwich4 " + inner.name());
        }
        checks += 3;
        fails.note(norm(a, NormKind::one()) <=
                       rt * norm(a, NormKind::block_max(NormKind::one(), rb, cb)) * (1 + 1e-12),
                   "tight one");
        fails.note(norm(a, NormKind::inf()) <=
                       ct * norm(a, NormKind::block_max(NormKind::inf(), rb, cb)) * (1 + 1e-12),
                   "tight inf");
        {
            const double nf = norm(a, NormKind::frobenius());
            const bool ok =
                norm(a, NormKind::block_sum(NormKind::frobenius(), rb, cb)) /
                        std::sqrt(rt * ct) <=
                    nf * (1 + 1e-12) &&
                nf <= std::sqrt(rt * ct) *
                          norm(a, NormKind::block_max(NormKind::frobenius(), rb, cb)) *
                          (1 + 1e-12);
            fails.note(ok, "tight frobenius");
        }

        // zero-padding invariance
        {
            Matrix padded(r + 1, c + 2);
            place(padded, 0, 0, a);
            bool ok = true;
            for (const auto& kind : scalar_kinds)
                if (std::fabs(norm(a, kind) - norm(padded, kind)) >
                    1e-12 * std::max(1.0, norm(a, kind)))
                    ok = false;
            ++checks;
            fails.note(ok, "zero padding");
        }

        // column-partition additivity (integer-valued entries, exact)
        {
            Matrix ia(r, c);
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < c; ++j)
                    ia(i, j) = static_cast<double>(static_cast<int>(rng.uniform() * 9) - 4);
            const std::size_t csplit = cb.offset(cb.num_blocks() / 2);
            if (csplit > 0 && csplit < c) {
                std::vector<std::size_t> left, right;
                for (std::size_t s : cb.starts()) {
                    if (s <= csplit) left.push_back(s);
                    if (s >= csplit + 1) right.push_back(s - csplit);
                }
                left.push_back(csplit + 1);
                const BlockingScheme cbl(left, csplit);
                const BlockingScheme cbr(right, c - csplit);
                const Matrix b1 = submatrix(ia, 0, r, 0, csplit);
                const Matrix b2 = submatrix(ia, 0, r, csplit, c);
                bool ok = true;
                for (const auto& inner : {NormKind::max(), NormKind::one(), NormKind::sum()}) {
                    if (norm(ia, NormKind::block_sum(inner, rb, cb)) !=
                        norm(b1, NormKind::block_sum(inner, rb, cbl)) +
                            norm(b2, NormKind::block_sum(inner, rb, cbr)))
                        ok = false;
                    if (norm(ia, NormKind::block_max(inner, rb, cb)) !=
                        std::max(norm(b1, NormKind::block_max(inner, rb, cbl)),
                                 norm(b2, NormKind::block_max(inner, rb, cbr))))
                        ok = false;
                }
                ++checks;
                fails.note(ok, "partition additivity");
            }
        }

        // block-sum Frobenius submultiplicativity
        {
            const std::size_t p = 2 + static_cast<std::size_t>(rng.uniform() * 7);
            Matrix b(c, p);
            for (std::size_t i = 0; i < c; ++i)
                for (std::size_t j = 0; j < p; ++j) b(i, j) = rng.symmetric();
            const BlockingScheme pb = random_blocking(p, 3, 0xAB000 + trial);
            const double lhs =
                norm(matmul(a, b), NormKind::block_sum(NormKind::frobenius(), rb, pb));
            const double rhs =
                norm(a, NormKind::block_sum(NormKind::frobenius(), rb, cb)) *
                norm(b, NormKind::block_sum(NormKind::frobenius(), cb, pb));
            ++checks;
            fails.note(lhs <= rhs * (1 + 1e-12), "submultiplicativity");
        }
    }
    res.passed = fails.count == 0;
    res.detail = summarize(fails, checks);
    return res;
}

} // namespace

void AcceptanceTally::absorb(const std::vector<BoundCheck>& checks) {
    for (const auto& c : checks) {
        if (c.skipped) continue;
        ++factor_checks;
        if (!c.satisfied) {
            ++factor_failures;
            failure_names.push_back(c.context.empty() ? c.name : c.name + " @ " + c.context);
        }
    }
}

CriterionResult run_criterion(int id, AcceptanceTally& tally) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult res;
    switch (id) {
        case 1: res = criterion_zielke(tally); break;
        case 2: res = criterion_turing(tally); break;
        case 3: res = criterion_diag_dominance(tally); break;
        case 4: res = criterion_block_dominance(tally); break;
        case 5: res = criterion_backward_error(tally); break;
        case 6: res = criterion_oracle(tally); break;
        case 7: res = criterion_modfree(tally); break;
        case 8: res = criterion_psi(tally); break;
        case 9: res = criterion_woodbury(tally); break;
        case 10: res = criterion_factor_bounds(tally); break;
        case 11: res = criterion_norm_properties(tally); break;
        default: throw std::invalid_argument("unknown criterion id");
    }
    res.ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

std::vector<std::string> suite_names() {
    return {"norms", "growth", "beam", "zielke", "modfree", "psi"};
}

std::vector<int> suite_criteria(const std::string& suite) {
    if (suite == "norms") return {11};
    if (suite == "growth") return {2, 3, 4};
    if (suite == "beam") return {5, 6, 9};
    if (suite == "zielke") return {1};
    if (suite == "modfree") return {7};
    if (suite == "psi") return {8};
    throw std::invalid_argument("unknown suite: " + suite);
}

int verify_command(const std::string& suite, bool quiet) {
    std::vector<int> ids;
    try {
        ids = suite_criteria(suite);
    } catch (const std::invalid_argument&) {
        std::cerr << "error: unknown suite '" << suite << "'. Available:";
        for (const auto& s : suite_names()) std::cerr << " " << s;
        std::cerr << "\n";
        return 1;
    }
    AcceptanceTally tally;
    bool all_ok = true;
    for (int id : ids) {
        const CriterionResult r = run_criterion(id, tally);
        all_ok = all_ok && r.passed;
        if (!quiet)
            std::cout << (r.passed ? "PASS" : "FAIL") << "  criterion " << r.id << "  "
                      << r.name << "  [" << r.detail << "]  (" << r.ms << " ms)\n";
    }
    return all_ok ? 0 : 2;
}

std::vector<CriterionResult> run_all_criteria() {
    AcceptanceTally tally;
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 11; ++id) out.push_back(run_criterion(id, tally));
    return out;
}

} // namespace beamlu::cli
