#pragma once

#include <optional>
#include <string>
#include <vector>

#include "beamlu/beam.hpp"
#include "beamlu/block_lu.hpp"
#include "beamlu/blocking.hpp"
#include "beamlu/matrix.hpp"
#include "beamlu/norms.hpp"

namespace beamlu {

struct PointwiseDominance {
    bool by_rows = false;
    bool by_cols = false;
    double delta_r = 0.0; // min over rows of |a_ii| - sum_{j!=i} |a_ij|
    double delta_c = 0.0;
};

struct BlockwiseDominance {
    bool by_rows = false;
    bool by_cols = false;
    double delta_r = 0.0; // min over block rows of ||(A_ii)^{-1}||^{-1} - sum ||A_ij||
    double delta_c = 0.0;
    std::string inner_rows; // norm used for the row margins
    std::string inner_cols;
};

struct DominanceReport {
    PointwiseDominance pointwise;
    BlockwiseDominance blockwise;
};

/// Exact dominance margins, pointwise and blockwise. By default block column
/// dominance uses the 1-operator inner norm and block row dominance the
/// inf-operator inner norm (the corrected Varah pairing); passing `inner`
/// overrides both sides.
DominanceReport dominance(const Matrix& a, const BlockingScheme& blocking,
                          std::optional<NormKind> inner = std::nullopt);

/// One measured-vs-bound comparison. `satisfied` means
/// measured <= bound * (1 + 1e-9); for log_scale entries both values are
/// log10 and the same slack applies to the underlying linear quantities.
struct BoundCheck {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool satisfied = false;
    std::string context;
    bool log_scale = false;
    bool skipped = false;
    std::string note;
};

BoundCheck make_check(std::string name, double measured, double bound, std::string context = {});
BoundCheck make_check_log10(std::string name, double log10_measured, double log10_bound,
                            std::string context = {});
BoundCheck make_skipped(std::string name, std::string reason, std::string context = {});

/// Largest tau for which no modification is predicted (Varah-style bounds):
/// delta_c/sqrt(n), delta_r/sqrt(n), sqrt(delta_c*delta_r), and the block
/// analogues with the Delta margins. Fields are absent when the matching
/// dominance does not hold (or, for the block fields, when the report was
/// computed with a non-default inner norm pairing).
struct ModificationFreeBound {
    std::optional<double> tau_max_cols;
    std::optional<double> tau_max_rows;
    std::optional<double> tau_max_both;
    std::optional<double> block_tau_max_cols;
    std::optional<double> block_tau_max_rows;
    std::optional<double> block_tau_max_both;
};

ModificationFreeBound modification_free_bound(const DominanceReport& report, const Matrix& a);

/// H-matrix variant for caller-supplied diagonal scalings with entries in
/// (0,1]: margins of D1*A (columns) and A*D2 (rows).
ModificationFreeBound h_matrix_bound(const Matrix& a, const std::vector<double>& d1,
                                     const std::vector<double>& d2);

/// Growth-factor bounds for the matrix whose elimination produced `trace`
/// (pass the modified matrix for a BEAM run): dominance-gated growth values,
/// the norm-equivalence sandwich, and the leading-submatrix Schur bound.
/// Checks whose norms were not traced are emitted as skipped with a reason.
std::vector<BoundCheck> check_growth_bounds(const Matrix& a, const BlockingScheme& blocking,
                                            const GrowthTrace& trace, std::string context = {});

std::vector<BoundCheck> check_factor_bounds(const BlockLUFactors& f, const Matrix& a,
                                            std::string context = {});
/// BEAM overload adds the tau-based ||L||_2 bound.
std::vector<BoundCheck> check_factor_bounds(const BeamFactorization& f, const Matrix& a,
                                            std::string context = {});

struct PsiReport {
    bool valid = false;  // modifications present and A nonsingular
    double psi = 0.0;    // ||A~^{-1}||_2 / ||A^{-1}||_2
    double bound_general = 0.0; // 1/(1 - tau_hat k2(A)), valid iff tau_hat k2(A) < 1
    bool bound_general_valid = false;
    double bound_psd = 0.0; // 1 + tau_hat k2(A), valid iff F^T F + F + F^T is PSD
    bool bound_psd_valid = false;
    double f_hermitian_part_min_eig = 0.0;
    double cond_c = 0.0; // condition number of the capacitance matrix
    std::string note;
};

struct PsiResult {
    PsiReport report;
    std::vector<BoundCheck> checks;
};

/// psi measured from SVDs of A and the modified matrix, the PSD gate on
/// F = M_S^{1/2} M_V^T A^{-1} M_U M_S^{1/2}, and the capacitance-condition
/// check. Empty when no modification was applied.
PsiResult psi_and_capacitance(const BeamFactorization& f, const Matrix& a,
                              std::string context = {});

/// Determinant (quotient-formula) bounds, compared in log10 scale.
std::vector<BoundCheck> determinant_bounds(const BeamFactorization& f, const Matrix& a,
                                           std::string context = {});

/// Runs BEAM on the Zielke matrix and checks the worst-case growth value
/// tau^(1-nt) plus the one-modification-per-block structure.
/// Preconditions: 0 < tau <= 1/2 and every block of size at least 2.
std::vector<BoundCheck> zielke_growth_check(std::size_t n, std::size_t block_size, double tau);

} // namespace beamlu
