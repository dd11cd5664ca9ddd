#pragma once

#include <cstddef>
#include <vector>

#include "beamlu/matrix.hpp"

namespace beamlu {

/// A = U * diag(sigma) * Vt with U, Vt orthogonal and sigma descending.
struct SvdResult {
    Matrix U;
    std::vector<double> sigma;
    Matrix Vt;
};

inline constexpr std::size_t kDefaultMaxBlockSize = 64;
inline constexpr std::size_t kJacobiSweepLimit = 30;

/// Cyclic one-sided Jacobi SVD of a small square matrix (side bounded by
/// `max_side`). Chosen over bidiagonalization because the diagonal blocks are
/// small and Jacobi delivers high relative accuracy of tiny singular values,
/// which the modification threshold test consumes.
/// Throws std::invalid_argument for non-square or oversized input and
/// numerical_error (carrying the sweep count) on non-convergence.
SvdResult svd_small(const Matrix& a, std::size_t max_side = kDefaultMaxBlockSize);

/// Jacobi SVD of any rectangular matrix; sizes above the small-block range
/// are QR-preconditioned first. No size limit.
SvdResult svd(const Matrix& a);

double sigma_max(const Matrix& a);
double sigma_min(const Matrix& a); // square input
/// sigma_max/sigma_min; +infinity when sigma_min == 0.
double cond2(const Matrix& a);

/// Eigenvalues of a symmetric matrix by cyclic two-sided Jacobi, descending.
std::vector<double> symmetric_eigenvalues(const Matrix& s);

/// Householder QR; returns thin Q (m x n) and square R (n x n), m >= n.
struct QrResult {
    Matrix Q;
    Matrix R;
};
QrResult householder_qr(const Matrix& a);

} // namespace beamlu
