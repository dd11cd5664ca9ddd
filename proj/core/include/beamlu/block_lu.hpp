#pragma once

#include <cstddef>
#include <vector>

#include "beamlu/blocking.hpp"
#include "beamlu/matrix.hpp"
#include "beamlu/norms.hpp"

namespace beamlu {

/// How the diagonal blocks A_kk^(k) are factored into L_kk * R_kk:
///   identity:     L_kk = I,              R_kk = A_kk^(k)
///   pointwise_lu: non-pivoted scalar LU, L_kk unit lower, R_kk upper
///   unitary:      L_kk = U from the SVD,  R_kk = Sigma * V^T
enum class DiagFactorizer { identity, pointwise_lu, unitary };

const char* to_string(DiagFactorizer d);

/// Per-elimination-step record: norms of the trailing Schur complement A^(k)
/// under the requested norm set, sigma_min of its leading diagonal block, and
/// the spectral norm of A^(k)_{k+1:nt,k} (A^(k)_kk)^{-1} (the subdiagonal
/// ratio the L-bound theorems assume to be at most 1).
struct GrowthStep {
    std::vector<double> norms; // parallel to GrowthTrace::kinds()
    double sigma_min_diag = 0.0;
    double subdiag_ratio = 0.0; // zero at the final step
};

class GrowthTrace {
public:
    GrowthTrace() = default;
    explicit GrowthTrace(std::vector<NormKind> kinds) : kinds_(std::move(kinds)) {}

    const std::vector<NormKind>& kinds() const { return kinds_; }
    std::size_t num_steps() const { return steps_.size(); }
    const GrowthStep& step(std::size_t k) const { return steps_.at(k); }

    bool has(const NormKind& kind) const;
    /// Norm of A^(k) (step k, 0-based; step 0 is A itself).
    double value(std::size_t step, const NormKind& kind) const;
    double max_subdiag_ratio() const;
    /// Smallest sigma_min over all diagonal Schur blocks; the largest tau
    /// that would leave a matrix unmodified sits just below this.
    double min_diag_sigma() const;

    void push_step(GrowthStep s) { steps_.push_back(std::move(s)); }

private:
    std::vector<NormKind> kinds_;
    std::vector<GrowthStep> steps_;
};

/// max_k ||A^(k)||_kind / ||A||_kind over all recorded steps.
/// Throws std::invalid_argument when `kind` was not traced.
double growth_factor(const GrowthTrace& trace, const NormKind& kind);

struct BlockLUFactors {
    Matrix L; // block lower triangular; blocks strictly above the diagonal are exactly zero
    Matrix R; // block upper triangular
    BlockingScheme blocking;
    DiagFactorizer diag;
    GrowthTrace trace;
};

struct FactorOptions {
    std::vector<NormKind> trace_norms = default_trace_norms();
    std::size_t max_block_size = 64; // SVD side limit for the unitary factorizer
};

/// Non-pivoted block LU, Schur complements updated strictly in order.
/// Completes if and only if A is block strongly nonsingular; breakdown throws
/// block_singular_error carrying the failing block index.
BlockLUFactors factor_block_lu(const Matrix& a, const BlockingScheme& blocking,
                               DiagFactorizer diag, const FactorOptions& opts = {});

/// Blockwise substitution in strictly ascending (forward) / descending (back)
/// block order. Diagonal blocks are solved by dense GEPP; a singular diagonal
/// block throws numerical_error carrying the block index.
std::vector<double> block_forward_sub(const Matrix& l, const BlockingScheme& blocking,
                                      const std::vector<double>& b);
std::vector<double> block_back_sub(const Matrix& r, const BlockingScheme& blocking,
                                   const std::vector<double>& y);
Matrix block_lower_solve(const Matrix& l, const BlockingScheme& blocking, const Matrix& b);
Matrix block_upper_solve(const Matrix& r, const BlockingScheme& blocking, const Matrix& b);

/// True iff every blocking-aligned leading principal submatrix has
/// sigma_min > tol * ||A||_2.
bool is_block_strongly_nonsingular(const Matrix& a, const BlockingScheme& blocking, double tol);

namespace detail {

/// Additive-modification hook threaded through the shared factor core, so a
/// modification-free run is bit-identical to factor_block_lu with unitary
/// diagonals.
struct ModificationSink {
    bool enabled = false;
    double tau = 0.0;
    std::size_t count = 0;
    std::vector<std::size_t> block_of;
    std::vector<double> deltas;
    std::vector<std::vector<double>> u_cols; // zero-padded to full dimension
    std::vector<std::vector<double>> v_cols;
};

BlockLUFactors factor_core(const Matrix& a, const BlockingScheme& blocking, DiagFactorizer diag,
                           const FactorOptions& opts, ModificationSink* mods);

} // namespace detail

} // namespace beamlu
