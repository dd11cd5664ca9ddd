#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "beamlu/block_lu.hpp"
#include "beamlu/dense_solve.hpp"
#include "beamlu/matrix.hpp"

namespace beamlu {

/// The additive modifications applied while factoring: the factored matrix is
/// A~ = A + U_cols * diag(sigma_deltas) * V_cols^T. Each column pair holds the
/// singular vectors of the offending diagonal block, zero-padded to full
/// dimension, and each delta is tau - sigma for a singular value sigma <= tau.
struct ModificationRecord {
    std::size_t count = 0;
    Matrix u_cols; // n x m
    std::vector<double> sigma_deltas;
    Matrix v_cols; // n x m
    std::vector<std::size_t> block_of;
    double tau = 0.0;
    double tau_hat = 0.0;
};

/// Woodbury pieces: C_L = L~^{-1} M_U, C_R = M_Sigma M_V^T R~^{-1}, and the
/// capacitance matrix C = I - C_R C_L kept in GEPP-factored form.
struct CapacitanceParts {
    Matrix c_left;  // n x m
    Matrix c_right; // m x n
    Matrix c;       // m x m
    PivotedLU c_lu;
};

struct BeamFactorization {
    BlockLUFactors factors; // unitary diagonals
    ModificationRecord mods;
    std::optional<CapacitanceParts> capacitance; // present iff count > 0 and woodbury enabled
    double norm_a2 = 0.0;                        // ||A||_2, the scale behind tau
    bool woodbury = false;
};

struct RefineOptions {
    std::size_t max_iters = 0;
    double target_rel_residual = 0.0;
};

struct SolveReport {
    std::vector<double> x;
    std::size_t iterations = 0;     // refinement iterations actually used
    std::vector<double> residuals;  // ||b - A x||_2 / (||A||_2 ||x||_2), entry per
                                    // iteration including iteration 0
    bool woodbury_used = false;
    bool diverged = false;          // residual grew two consecutive iterations
};

/// Algorithm: block LU with SVD-factored diagonal blocks; any singular value
/// sigma <= tau = tau_hat * ||A||_2 is raised to exactly tau and the rank-one
/// change recorded. Cannot break down for finite nonzero A and tau_hat > 0.
/// ||A||_2 is computed by a full SVD for reproducibility.
BeamFactorization beam_factor(const Matrix& a, const BlockingScheme& blocking, double tau_hat,
                              bool woodbury, const FactorOptions& opts = {});

/// Forward substitution, optional Woodbury correction, back substitution,
/// then iterative refinement against the original (unmodified) matrix.
SolveReport beam_solve(const BeamFactorization& f, const std::vector<double>& b,
                       const RefineOptions& refine, const Matrix& a_original);

/// A + M_U diag(M_Sigma) M_V^T; returns A unchanged when no modification was
/// applied.
Matrix modified_matrix(const BeamFactorization& f, const Matrix& a);

} // namespace beamlu
